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

#include <doctest.h>

#include <numbers>
#include <random>
#include <vector>

#include "zeno/fft.hpp"
#include "zeno/kernels.hpp"

using zeno::Complex;
namespace k = zeno::kernels;

namespace {

std::vector<Complex> random_vec(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<Complex> v(n);
  for (Complex& c : v) c = Complex{dist(rng), dist(rng)};
  return v;
}

// O(n^2) reference transform.
std::vector<Complex> dft_reference(const std::vector<Complex>& x) {
  const std::size_t n = x.size();
  std::vector<Complex> out(n, Complex{0.0, 0.0});
  for (std::size_t kk = 0; kk < n; ++kk) {
    for (std::size_t j = 0; j < n; ++j) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(kk * j) /
                           static_cast<double>(n);
      out[kk] += x[j] * Complex{std::cos(angle), std::sin(angle)};
    }
  }
  return out;
}

}  // namespace

TEST_CASE("serial and parallel reductions are bitwise identical") {
  for (std::size_t n : {std::size_t{1}, std::size_t{7}, std::size_t{1024}, std::size_t{1025},
                        std::size_t{4096}, std::size_t{100001}}) {
    const auto a = random_vec(n, 11 + n);
    const auto b = random_vec(n, 23 + n);
    const Complex ds = k::detail::cdot_serial(a, b);
    const Complex dp = k::detail::cdot_parallel(a, b);
    CHECK(ds.real() == dp.real());
    CHECK(ds.imag() == dp.imag());
    CHECK(k::detail::sum_abs2_serial(a) == k::detail::sum_abs2_parallel(a));
  }
}

TEST_CASE("serial and parallel pointwise kernels are bitwise identical") {
  const std::size_t n = 100001;
  const auto x = random_vec(n, 3);
  const auto k1 = random_vec(n, 4);
  const auto k2 = random_vec(n, 5);
  const auto k3 = random_vec(n, 6);
  const auto k4 = random_vec(n, 7);

  auto ys = random_vec(n, 8);
  auto yp = ys;
  k::detail::rk4_combine_serial(ys, k1, k2, k3, k4, 1e-3);
  k::detail::rk4_combine_parallel(yp, k1, k2, k3, k4, 1e-3);
  CHECK(ys == yp);

  auto as = random_vec(n, 9);
  auto ap = as;
  k::detail::add_scaled_serial(as, Complex{0.3, -0.7}, x);
  k::detail::add_scaled_parallel(ap, Complex{0.3, -0.7}, x);
  CHECK(as == ap);

  std::vector<Complex> os(n), op(n);
  k::detail::assign_sum_scaled_serial(os, x, 0.25, k1);
  k::detail::assign_sum_scaled_parallel(op, x, 0.25, k1);
  CHECK(os == op);

  auto ms = random_vec(n, 10);
  auto mp = ms;
  k::detail::cmul_in_place_serial(ms, x);
  k::detail::cmul_in_place_parallel(mp, x);
  CHECK(ms == mp);

  auto ss = random_vec(n, 12);
  auto sp = ss;
  k::detail::scale_in_place_serial(ss, Complex{0.0, 1.0});
  k::detail::scale_in_place_parallel(sp, Complex{0.0, 1.0});
  CHECK(ss == sp);
}

TEST_CASE("blocked dot product matches a naive sum") {
  const std::size_t n = 40000;
  const auto a = random_vec(n, 31);
  const auto b = random_vec(n, 32);
  Complex naive{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) naive += std::conj(a[i]) * b[i];
  const Complex blocked = k::cdot(a, b);
  CHECK(std::abs(blocked - naive) <= 1e-12 * std::abs(naive) + 1e-12);
}

TEST_CASE("all_finite flags NaN and infinity") {
  auto v = random_vec(16, 1);
  CHECK(k::all_finite(v));
  v[7] = Complex{std::numeric_limits<double>::quiet_NaN(), 0.0};
  CHECK_FALSE(k::all_finite(v));
  v[7] = Complex{0.0, std::numeric_limits<double>::infinity()};
  CHECK_FALSE(k::all_finite(v));
}

TEST_CASE("fft matches the O(n^2) reference") {
  const std::size_t n = 64;
  const auto x = random_vec(n, 77);
  const auto expected = dft_reference(x);

  zeno::FftPlan plan(n);
  auto got = x;
  plan.forward(got);
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(std::abs(got[i] - expected[i]) < 1e-11);
  }
}

TEST_CASE("fft single harmonic lands in one bin") {
  const std::size_t n = 256;
  std::vector<Complex> x(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double angle = 2.0 * std::numbers::pi * 5.0 * static_cast<double>(j) /
                         static_cast<double>(n);
    x[j] = Complex{std::cos(angle), std::sin(angle)};
  }
  zeno::FftPlan plan(n);
  plan.forward(x);
  for (std::size_t kk = 0; kk < n; ++kk) {
    if (kk == 5) {
      CHECK(std::abs(x[kk] - Complex{static_cast<double>(n), 0.0}) < 1e-9);
    } else {
      CHECK(std::abs(x[kk]) < 1e-9);
    }
  }
}

TEST_CASE("fft round trip and Parseval") {
  const std::size_t n = 2048;
  const auto x = random_vec(n, 99);
  zeno::FftPlan plan(n);

  auto y = x;
  plan.forward(y);
  const double spectral_power = k::sum_abs2(y) / static_cast<double>(n);
  plan.inverse(y);

  double max_err = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_err = std::max(max_err, std::abs(y[i] - x[i]));
  CHECK(max_err < 1e-13);

  const double power = k::sum_abs2(x);
  CHECK(spectral_power == doctest::Approx(power).epsilon(1e-12));
}

TEST_CASE("fft serial and parallel paths are bitwise identical") {
  const std::size_t n = std::size_t{1} << 16;  // above the parallel cutoff
  const auto x = random_vec(n, 1234);
  zeno::FftPlan plan(n);

  const bool saved = k::parallel_enabled();
  auto serial = x;
  k::set_parallel_enabled(false);
  plan.forward(serial);

  auto parallel = x;
  k::set_parallel_enabled(true);
  plan.forward(parallel);
  k::set_parallel_enabled(saved);

  CHECK(serial == parallel);
}

TEST_CASE("fft rejects non power-of-two sizes") {
  CHECK_THROWS_AS(zeno::FftPlan(0), std::invalid_argument);
  CHECK_THROWS_AS(zeno::FftPlan(1), std::invalid_argument);
  CHECK_THROWS_AS(zeno::FftPlan(48), std::invalid_argument);
}
