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

/// Dense K x K Hermitian matrix, row-major. Hermiticity is checked at
/// construction (within 1e-12 relative to the largest entry); downstream code
/// relies on it. Immutable after construction.
class HermitianMatrix {
 public:
  HermitianMatrix(std::size_t dim, std::vector<Complex> row_major);

  static HermitianMatrix diagonal(std::vector<double> eigenvalues);

  std::size_t dim() const noexcept { return dim_; }
  Complex at(std::size_t i, std::size_t j) const noexcept { return data_[i * dim_ + j]; }
  const std::vector<Complex>& data() const noexcept { return data_; }

  /// out = H x
  void apply(std::span<const Complex> x, std::span<Complex> out) const;
  std::vector<Complex> apply(const std::vector<Complex>& x) const;

 private:
  std::size_t dim_;
  std::vector<Complex> data_;
};

}  // namespace zeno
