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

// Data-parallel inner loops shared by the state algebra and the evolution
// models. Every kernel exists in a serial and an OpenMP variant; the public
// entry points dispatch on the global policy and the array size.
//
// Determinism contract: reductions are computed block-wise with a fixed block
// size and the per-block partial sums are accumulated in block order. The
// serial and parallel variants therefore produce bitwise-identical results,
// independent of thread count and scheduling. Pointwise kernels have disjoint
// writes and are bitwise-identical trivially.

namespace zeno::kernels {

using Complex = std::complex<double>;

// Reduction block size. Changing it changes rounding; it is part of the
// numeric contract above.
inline constexpr std::size_t kReductionBlock = 1024;

// Arrays shorter than this stay on the serial path even when parallelism is
// enabled; the results are identical either way.
inline constexpr std::size_t kParallelCutoff = std::size_t{1} << 15;

bool parallel_enabled() noexcept;
void set_parallel_enabled(bool on) noexcept;

/// sum_i conj(a[i]) * b[i]
Complex cdot(std::span<const Complex> a, std::span<const Complex> b);

/// sum_i |a[i]|^2
double sum_abs2(std::span<const Complex> a);

/// a[i] *= factor
void scale_in_place(std::span<Complex> a, Complex factor);

/// y[i] += factor * x[i]
void add_scaled(std::span<Complex> y, Complex factor, std::span<const Complex> x);

/// out[i] = base[i] + h * k[i]
void assign_sum_scaled(std::span<Complex> out, std::span<const Complex> base,
                       double h, std::span<const Complex> k);

/// y[i] += (h/6) * (k1[i] + 2 k2[i] + 2 k3[i] + k4[i])
void rk4_combine(std::span<Complex> y, std::span<const Complex> k1,
                 std::span<const Complex> k2, std::span<const Complex> k3,
                 std::span<const Complex> k4, double h);

/// a[i] *= b[i]
void cmul_in_place(std::span<Complex> a, std::span<const Complex> b);

/// true iff every real and imaginary part is finite
bool all_finite(std::span<const Complex> a) noexcept;

// Fixed serial / parallel variants, exposed for the reference tests and the
// benchmark. The public entry points above select between them.
namespace detail {

Complex cdot_serial(std::span<const Complex> a, std::span<const Complex> b);
Complex cdot_parallel(std::span<const Complex> a, std::span<const Complex> b);

double sum_abs2_serial(std::span<const Complex> a);
double sum_abs2_parallel(std::span<const Complex> a);

void scale_in_place_serial(std::span<Complex> a, Complex factor);
void scale_in_place_parallel(std::span<Complex> a, Complex factor);

void add_scaled_serial(std::span<Complex> y, Complex factor, std::span<const Complex> x);
void add_scaled_parallel(std::span<Complex> y, Complex factor, std::span<const Complex> x);

void assign_sum_scaled_serial(std::span<Complex> out, std::span<const Complex> base,
                              double h, std::span<const Complex> k);
void assign_sum_scaled_parallel(std::span<Complex> out, std::span<const Complex> base,
                                double h, std::span<const Complex> k);

void rk4_combine_serial(std::span<Complex> y, std::span<const Complex> k1,
                        std::span<const Complex> k2, std::span<const Complex> k3,
                        std::span<const Complex> k4, double h);
void rk4_combine_parallel(std::span<Complex> y, std::span<const Complex> k1,
                          std::span<const Complex> k2, std::span<const Complex> k3,
                          std::span<const Complex> k4, double h);

void cmul_in_place_serial(std::span<Complex> a, std::span<const Complex> b);
void cmul_in_place_parallel(std::span<Complex> a, std::span<const Complex> b);

}  // namespace detail

}  // namespace zeno::kernels
