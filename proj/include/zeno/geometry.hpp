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

#include <span>
#include <vector>

#include "zeno/dynamics.hpp"
#include "zeno/state.hpp"

// Generalized Fubini-Study distance, speed, and path length on the projective
// space of rays. Everything is gauge invariant: multiplying a trajectory by
// any smooth nonzero complex function Z(t) leaves these quantities unchanged.

namespace zeno {

/// Sampled speed v(t) along a trajectory and the accumulated path length
/// (trapezoidal quadrature of the speeds over the sample times).
struct GeometryReport {
  std::vector<double> times;
  std::vector<double> speeds;
  double total_length = 0.0;
};

/// Finite ray distance s = sqrt(4 (1 - |<a/||a||, b/||b||>|^2)), in [0, 2].
/// Separations with 1 - |overlap|^2 inside the +-1e-12 roundoff window are
/// treated as the same ray and give exactly 0.
double fs_distance(const State& a, const State& b);

/// Instantaneous ray speed
///   v = 2 sqrt( <psi'|psi'>/||psi||^2 - |<psi|psi'>|^2/||psi||^4 ).
/// The radicand is zeroed inside a +-1e-12 window (scaled by its natural
/// magnitude); a radicand more negative than that signals a broken
/// derivative and raises NumericsError.
double fs_speed(const State& psi, const State& psi_dot);

/// Speeds and total path length along a sampled trajectory, with derivatives
/// supplied by the model. Times must be strictly increasing, >= 2 samples.
GeometryReport path_length(std::span<const TimedState> trajectory, const EvolutionModel& model);

}  // namespace zeno
