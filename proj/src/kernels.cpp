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

#include "zeno/kernels.hpp"

#include <atomic>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <vector>

namespace zeno::kernels {

namespace {

std::atomic<bool> g_parallel{true};

inline std::size_t block_count(std::size_t n) {
  return (n + kReductionBlock - 1) / kReductionBlock;
}

inline Complex cdot_block(const Complex* a, const Complex* b, std::size_t n) {
  Complex s{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) s += std::conj(a[i]) * b[i];
  return s;
}

inline double abs2_block(const Complex* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::norm(a[i]);
  return s;
}

inline bool use_parallel(std::size_t n) {
  return g_parallel.load(std::memory_order_relaxed) && n >= kParallelCutoff;
}

}  // namespace

bool parallel_enabled() noexcept { return g_parallel.load(std::memory_order_relaxed); }
void set_parallel_enabled(bool on) noexcept { g_parallel.store(on, std::memory_order_relaxed); }

namespace detail {

Complex cdot_serial(std::span<const Complex> a, std::span<const Complex> b) {
  assert(a.size() == b.size());
  const std::size_t n = a.size();
  Complex acc{0.0, 0.0};
  for (std::size_t off = 0; off < n; off += kReductionBlock) {
    const std::size_t len = std::min(kReductionBlock, n - off);
    acc += cdot_block(a.data() + off, b.data() + off, len);
  }
  return acc;
}

Complex cdot_parallel(std::span<const Complex> a, std::span<const Complex> b) {
  assert(a.size() == b.size());
  const std::size_t n = a.size();
  const std::size_t nblk = block_count(n);
  std::vector<Complex> partial(nblk);
#pragma omp parallel for schedule(static)
  for (std::int64_t blk = 0; blk < static_cast<std::int64_t>(nblk); ++blk) {
    const std::size_t off = static_cast<std::size_t>(blk) * kReductionBlock;
    const std::size_t len = std::min(kReductionBlock, n - off);
    partial[static_cast<std::size_t>(blk)] = cdot_block(a.data() + off, b.data() + off, len);
  }
  Complex acc{0.0, 0.0};
  for (const Complex& p : partial) acc += p;
  return acc;
}

double sum_abs2_serial(std::span<const Complex> a) {
  const std::size_t n = a.size();
  double acc = 0.0;
  for (std::size_t off = 0; off < n; off += kReductionBlock) {
    const std::size_t len = std::min(kReductionBlock, n - off);
    acc += abs2_block(a.data() + off, len);
  }
  return acc;
}

double sum_abs2_parallel(std::span<const Complex> a) {
  const std::size_t n = a.size();
  const std::size_t nblk = block_count(n);
  std::vector<double> partial(nblk);
#pragma omp parallel for schedule(static)
  for (std::int64_t blk = 0; blk < static_cast<std::int64_t>(nblk); ++blk) {
    const std::size_t off = static_cast<std::size_t>(blk) * kReductionBlock;
    const std::size_t len = std::min(kReductionBlock, n - off);
    partial[static_cast<std::size_t>(blk)] = abs2_block(a.data() + off, len);
  }
  double acc = 0.0;
  for (double p : partial) acc += p;
  return acc;
}

void scale_in_place_serial(std::span<Complex> a, Complex factor) {
  for (Complex& v : a) v *= factor;
}

void scale_in_place_parallel(std::span<Complex> a, Complex factor) {
  const std::int64_t n = static_cast<std::int64_t>(a.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) a[static_cast<std::size_t>(i)] *= factor;
}

void add_scaled_serial(std::span<Complex> y, Complex factor, std::span<const Complex> x) {
  assert(y.size() == x.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += factor * x[i];
}

void add_scaled_parallel(std::span<Complex> y, Complex factor, std::span<const Complex> x) {
  assert(y.size() == x.size());
  const std::int64_t n = static_cast<std::int64_t>(y.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const std::size_t u = static_cast<std::size_t>(i);
    y[u] += factor * x[u];
  }
}

void assign_sum_scaled_serial(std::span<Complex> out, std::span<const Complex> base,
                              double h, std::span<const Complex> k) {
  assert(out.size() == base.size() && base.size() == k.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = base[i] + h * k[i];
}

void assign_sum_scaled_parallel(std::span<Complex> out, std::span<const Complex> base,
                                double h, std::span<const Complex> k) {
  assert(out.size() == base.size() && base.size() == k.size());
  const std::int64_t n = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const std::size_t u = static_cast<std::size_t>(i);
    out[u] = base[u] + h * k[u];
  }
}

void rk4_combine_serial(std::span<Complex> y, std::span<const Complex> k1,
                        std::span<const Complex> k2, std::span<const Complex> k3,
                        std::span<const Complex> k4, double h) {
  assert(y.size() == k1.size() && y.size() == k2.size() && y.size() == k3.size() &&
         y.size() == k4.size());
  const double c = h / 6.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] += c * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
}

void rk4_combine_parallel(std::span<Complex> y, std::span<const Complex> k1,
                          std::span<const Complex> k2, std::span<const Complex> k3,
                          std::span<const Complex> k4, double h) {
  assert(y.size() == k1.size() && y.size() == k2.size() && y.size() == k3.size() &&
         y.size() == k4.size());
  const double c = h / 6.0;
  const std::int64_t n = static_cast<std::int64_t>(y.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const std::size_t u = static_cast<std::size_t>(i);
    y[u] += c * (k1[u] + 2.0 * k2[u] + 2.0 * k3[u] + k4[u]);
  }
}

void cmul_in_place_serial(std::span<Complex> a, std::span<const Complex> b) {
  assert(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
}

void cmul_in_place_parallel(std::span<Complex> a, std::span<const Complex> b) {
  assert(a.size() == b.size());
  const std::int64_t n = static_cast<std::int64_t>(a.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const std::size_t u = static_cast<std::size_t>(i);
    a[u] *= b[u];
  }
}

}  // namespace detail

Complex cdot(std::span<const Complex> a, std::span<const Complex> b) {
  return use_parallel(a.size()) ? detail::cdot_parallel(a, b) : detail::cdot_serial(a, b);
}

double sum_abs2(std::span<const Complex> a) {
  return use_parallel(a.size()) ? detail::sum_abs2_parallel(a) : detail::sum_abs2_serial(a);
}

void scale_in_place(std::span<Complex> a, Complex factor) {
  if (use_parallel(a.size())) {
    detail::scale_in_place_parallel(a, factor);
  } else {
    detail::scale_in_place_serial(a, factor);
  }
}

void add_scaled(std::span<Complex> y, Complex factor, std::span<const Complex> x) {
  if (use_parallel(y.size())) {
    detail::add_scaled_parallel(y, factor, x);
  } else {
    detail::add_scaled_serial(y, factor, x);
  }
}

void assign_sum_scaled(std::span<Complex> out, std::span<const Complex> base,
                       double h, std::span<const Complex> k) {
  if (use_parallel(out.size())) {
    detail::assign_sum_scaled_parallel(out, base, h, k);
  } else {
    detail::assign_sum_scaled_serial(out, base, h, k);
  }
}

void rk4_combine(std::span<Complex> y, std::span<const Complex> k1,
                 std::span<const Complex> k2, std::span<const Complex> k3,
                 std::span<const Complex> k4, double h) {
  if (use_parallel(y.size())) {
    detail::rk4_combine_parallel(y, k1, k2, k3, k4, h);
  } else {
    detail::rk4_combine_serial(y, k1, k2, k3, k4, h);
  }
}

void cmul_in_place(std::span<Complex> a, std::span<const Complex> b) {
  if (use_parallel(a.size())) {
    detail::cmul_in_place_parallel(a, b);
  } else {
    detail::cmul_in_place_serial(a, b);
  }
}

bool all_finite(std::span<const Complex> a) noexcept {
  for (const Complex& v : a) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

}  // namespace zeno::kernels
