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

#include "zeno/state.hpp"

#include <cmath>
#include <utility>

#include "zeno/kernels.hpp"

namespace zeno {

namespace {

void require_finite(const std::vector<Complex>& v, const char* what) {
  if (!kernels::all_finite(v)) {
    throw NumericsError(std::string(what) + ": non-finite amplitude");
  }
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

FiniteState::FiniteState(std::vector<Complex> amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.empty()) throw DimensionError("FiniteState: dimension must be >= 1");
  require_finite(amps_, "FiniteState");
}

FiniteState FiniteState::basis(std::size_t dim, std::size_t index) {
  if (dim == 0 || index >= dim) throw DimensionError("FiniteState::basis: index out of range");
  std::vector<Complex> v(dim, Complex{0.0, 0.0});
  v[index] = Complex{1.0, 0.0};
  return FiniteState(std::move(v));
}

GridState::GridState(double x_min, double x_max, std::vector<Complex> samples)
    : x_min_(x_min), x_max_(x_max), samples_(std::move(samples)) {
  if (!(x_max_ > x_min_)) throw DimensionError("GridState: x_max must exceed x_min");
  if (samples_.size() < 8 || !is_power_of_two(samples_.size())) {
    throw DimensionError("GridState: n_points must be a power of two >= 8");
  }
  require_finite(samples_, "GridState");
}

std::size_t dimension(const State& s) noexcept {
  if (const auto* f = std::get_if<FiniteState>(&s)) return f->dim();
  return std::get<GridState>(s).n_points();
}

const std::vector<Complex>& coords(const State& s) noexcept {
  if (const auto* f = std::get_if<FiniteState>(&s)) return f->amps();
  return std::get<GridState>(s).samples();
}

double quadrature_weight(const State& s) noexcept {
  if (const auto* g = std::get_if<GridState>(&s)) return g->dx();
  return 1.0;
}

bool same_shape(const State& a, const State& b) noexcept {
  if (a.index() != b.index()) return false;
  if (const auto* fa = std::get_if<FiniteState>(&a)) {
    return fa->dim() == std::get<FiniteState>(b).dim();
  }
  const auto& ga = std::get<GridState>(a);
  const auto& gb = std::get<GridState>(b);
  return ga.n_points() == gb.n_points() && ga.x_min() == gb.x_min() && ga.x_max() == gb.x_max();
}

State with_coords(const State& like, std::vector<Complex> values) {
  if (const auto* g = std::get_if<GridState>(&like)) {
    return GridState(g->x_min(), g->x_max(), std::move(values));
  }
  return FiniteState(std::move(values));
}

double zero_norm_threshold(const State& s) noexcept {
  return 1e-12 * std::sqrt(static_cast<double>(dimension(s)));
}

Complex inner_product(const State& a, const State& b) {
  if (!same_shape(a, b)) {
    throw DimensionError("inner_product: states have different realization or shape");
  }
  const Complex raw = kernels::cdot(coords(a), coords(b));
  return quadrature_weight(a) * raw;
}

double norm(const State& a) {
  const double w = quadrature_weight(a);
  const double n2 = w * kernels::sum_abs2(coords(a));
  return std::sqrt(n2);
}

State normalize(const State& a) {
  const double n = norm(a);
  if (n <= zero_norm_threshold(a)) {
    throw ZeroNormError("normalize: state norm below zero threshold");
  }
  std::vector<Complex> v = coords(a);
  kernels::scale_in_place(v, Complex{1.0 / n, 0.0});
  return with_coords(a, std::move(v));
}

}  // namespace zeno
