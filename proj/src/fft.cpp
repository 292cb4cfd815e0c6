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

#include "zeno/fft.hpp"

#include <cassert>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

#include "zeno/kernels.hpp"

namespace zeno {

FftPlan::FftPlan(std::size_t n) : n_(n) {
  if (n < 2 || (n & (n - 1)) != 0) {
    throw std::invalid_argument("FftPlan: size must be a power of two >= 2");
  }
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;

  bitrev_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < bits; ++b) {
      r |= ((i >> b) & 1u) << (bits - 1 - b);
    }
    bitrev_[i] = r;
  }

  twiddle_.resize(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    twiddle_[k] = Complex(std::cos(angle), std::sin(angle));
  }
}

void FftPlan::transform(std::span<Complex> x, bool inverse) const {
  assert(x.size() == n_);
  const bool parallel = kernels::parallel_enabled() && n_ >= kernels::kParallelCutoff;

  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t j = bitrev_[i];
    if (i < j) std::swap(x[i], x[j]);
  }

  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n_ / len;
    const std::int64_t pairs = static_cast<std::int64_t>(n_ / 2);
    if (parallel) {
#pragma omp parallel for schedule(static)
      for (std::int64_t p = 0; p < pairs; ++p) {
        const std::size_t blk = static_cast<std::size_t>(p) / half;
        const std::size_t j = static_cast<std::size_t>(p) % half;
        const std::size_t i0 = blk * len + j;
        const std::size_t i1 = i0 + half;
        Complex w = twiddle_[j * stride];
        if (inverse) w = std::conj(w);
        const Complex t = w * x[i1];
        const Complex u = x[i0];
        x[i0] = u + t;
        x[i1] = u - t;
      }
    } else {
      for (std::int64_t p = 0; p < pairs; ++p) {
        const std::size_t blk = static_cast<std::size_t>(p) / half;
        const std::size_t j = static_cast<std::size_t>(p) % half;
        const std::size_t i0 = blk * len + j;
        const std::size_t i1 = i0 + half;
        Complex w = twiddle_[j * stride];
        if (inverse) w = std::conj(w);
        const Complex t = w * x[i1];
        const Complex u = x[i0];
        x[i0] = u + t;
        x[i1] = u - t;
      }
    }
  }

  if (inverse) {
    kernels::scale_in_place(x, Complex(1.0 / static_cast<double>(n_), 0.0));
  }
}

void FftPlan::forward(std::span<Complex> x) const { transform(x, false); }
void FftPlan::inverse(std::span<Complex> x) const { transform(x, true); }

}  // namespace zeno
