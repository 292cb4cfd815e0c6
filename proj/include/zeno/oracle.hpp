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

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "zeno/dynamics.hpp"
#include "zeno/state.hpp"

// Brute-force cross-checks, independent of the geometry module's speed
// formula: k extracted from the probability decay itself, speeds from divided
// differences of the ray distance, and quadrature checks of closed-form
// norms. fd_k_estimate never calls fs_speed; that independence is the point.

namespace zeno {

struct RichardsonEstimate {
  double value = 0.0;
  std::vector<std::pair<double, double>> stepwise;  // (h, raw estimate), h halving
  int extrapolation_order = 0;                      // number of eliminated error terms
};

/// k_hat(tau) = (1 - P(tau)) / tau^2 with P from an integrated trajectory,
/// Richardson-extrapolated over tau, tau/2, tau/4 (leading O(tau) error; the
/// integration step scales with each level). Requires dt <= tau/100 and
/// P(tau) > 0.5.
RichardsonEstimate fd_k_estimate(const EvolutionModel& model, const State& psi0, double tau,
                                 double dt);

/// v_hat(t) = fs_distance(psi(t), psi(t+h)) / h, Richardson-extrapolated over
/// (h, h/2). The provider returns the state at an arbitrary time.
RichardsonEstimate fd_speed_estimate(const std::function<State(double)>& trajectory, double t,
                                     double h);

/// Relative deviation |dx * sum(samples) - closed_form| / |closed_form|;
/// falls back to the absolute difference when closed_form == 0.
double quadrature_check(std::span<const double> samples, double dx, double closed_form);

}  // namespace zeno
