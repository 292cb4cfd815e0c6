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
#include <variant>
#include <vector>

#include "zeno/errors.hpp"

// State representations and the inner-product algebra shared by every other
// module. States are immutable after construction; all operations here are
// pure functions and safe to call concurrently.

namespace zeno {

using Complex = std::complex<double>;

/// Element of C^K, K >= 1. Possibly unnormalized.
class FiniteState {
 public:
  explicit FiniteState(std::vector<Complex> amplitudes);

  /// Basis vector e_index in C^dim.
  static FiniteState basis(std::size_t dim, std::size_t index);

  std::size_t dim() const noexcept { return amps_.size(); }
  const std::vector<Complex>& amps() const noexcept { return amps_; }

 private:
  std::vector<Complex> amps_;
};

/// Complex function sampled on a uniform periodic grid: sample i sits at
/// x_min + i*dx, i = 0 .. n_points-1, dx = (x_max - x_min)/n_points.
/// n_points must be a power of two >= 8 (spectral differentiation).
class GridState {
 public:
  GridState(double x_min, double x_max, std::vector<Complex> samples);

  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  std::size_t n_points() const noexcept { return samples_.size(); }
  double dx() const noexcept {
    return (x_max_ - x_min_) / static_cast<double>(samples_.size());
  }
  double x(std::size_t i) const noexcept { return x_min_ + static_cast<double>(i) * dx(); }
  const std::vector<Complex>& samples() const noexcept { return samples_; }

 private:
  double x_min_;
  double x_max_;
  std::vector<Complex> samples_;
};

using State = std::variant<FiniteState, GridState>;

/// Number of stored amplitudes (K for FiniteState, n_points for GridState).
std::size_t dimension(const State& s) noexcept;

/// Amplitude storage, realization-agnostic.
const std::vector<Complex>& coords(const State& s) noexcept;

/// Quadrature weight of one sample: dx for GridState (Riemann sum on the
/// periodic grid), 1 for FiniteState.
double quadrature_weight(const State& s) noexcept;

/// Whether a and b share realization and shape (same dimension, same grid).
bool same_shape(const State& a, const State& b) noexcept;

/// Rebuild a state with the same realization/metadata as `like` but the given
/// amplitudes. Validates finiteness.
State with_coords(const State& like, std::vector<Complex> values);

/// Norms below this refuse to normalize: 1e-12 * sqrt(dimension).
double zero_norm_threshold(const State& s) noexcept;

/// <a|b>, conjugate-linear in a. GridState: dx * sum_i conj(a_i) b_i.
Complex inner_product(const State& a, const State& b);

/// sqrt(Re <a|a>).
double norm(const State& a);

/// a / norm(a). Throws ZeroNormError when norm(a) <= zero_norm_threshold(a).
State normalize(const State& a);

}  // namespace zeno
