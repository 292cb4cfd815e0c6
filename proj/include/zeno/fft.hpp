// Copyright 2026 The zeno-lab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace zeno {

using Complex = std::complex<double>;

/// Radix-2 in-place FFT for power-of-two sizes. Forward convention
/// X[k] = sum_j x[j] exp(-2 pi i j k / n); inverse includes the 1/n factor.
///
/// A plan is immutable after construction and safe to share across threads.
/// Within one transform the butterfly stages run in parallel for large n;
/// writes are disjoint, so serial and parallel execution are bitwise equal.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);

  std::size_t size() const noexcept { return n_; }

  void forward(std::span<Complex> x) const;
  void inverse(std::span<Complex> x) const;

 private:
  void transform(std::span<Complex> x, bool inverse) const;

  std::size_t n_;
  std::vector<std::size_t> bitrev_;
  std::vector<Complex> twiddle_;  // exp(-2 pi i k / n), k in [0, n/2)
};

}  // namespace zeno
