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

#include "zeno/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "zeno/geometry.hpp"
#include "zeno/measurement.hpp"

namespace zeno {

RichardsonEstimate fd_k_estimate(const EvolutionModel& model, const State& psi0, double tau,
                                 double dt) {
  if (!(tau > 0.0)) throw std::invalid_argument("fd_k_estimate: tau must be > 0");
  if (!(dt > 0.0) || dt > tau / 100.0 * (1.0 + 1e-12)) {
    throw std::invalid_argument("fd_k_estimate: dt must satisfy 0 < dt <= tau/100");
  }

  RichardsonEstimate est;
  double raw[3];
  for (int level = 0; level < 3; ++level) {
    const double scale = std::pow(0.5, level);
    const double tau_l = tau * scale;
    const double dt_l = dt * scale;
    const State final = evolve_final(model, psi0, 0.0, tau_l, dt_l, StepMethod::Rk4);
    const double p = survival_probability(psi0, final);
    if (!(p > 0.5)) {
      throw std::invalid_argument("fd_k_estimate: tau too large, P(tau) <= 0.5");
    }
    raw[level] = (1.0 - p) / (tau_l * tau_l);
    est.stepwise.emplace_back(tau_l, raw[level]);
  }

  // k_hat(tau) = k + c1 tau + c2 tau^2 + ...: eliminate the O(tau) term at
  // ratio 2, then the O(tau^2) remainder.
  const double r01 = 2.0 * raw[1] - raw[0];
  const double r12 = 2.0 * raw[2] - raw[1];
  est.value = (4.0 * r12 - r01) / 3.0;
  est.extrapolation_order = 2;
  return est;
}

RichardsonEstimate fd_speed_estimate(const std::function<State(double)>& trajectory, double t,
                                     double h) {
  if (!(h > 0.0)) throw std::invalid_argument("fd_speed_estimate: h must be > 0");

  const State at_t = trajectory(t);
  const double v_h = fs_distance(at_t, trajectory(t + h)) / h;
  const double v_h2 = fs_distance(at_t, trajectory(t + 0.5 * h)) / (0.5 * h);

  RichardsonEstimate est;
  est.stepwise.emplace_back(h, v_h);
  est.stepwise.emplace_back(0.5 * h, v_h2);
  est.value = 2.0 * v_h2 - v_h;
  est.extrapolation_order = 1;
  return est;
}

double quadrature_check(std::span<const double> samples, double dx, double closed_form) {
  if (!(dx > 0.0)) throw std::invalid_argument("quadrature_check: dx must be > 0");
  double sum = 0.0;
  for (double s : samples) sum += s;
  sum *= dx;
  if (closed_form == 0.0) return std::abs(sum);
  return std::abs(sum - closed_form) / std::abs(closed_form);
}

}  // namespace zeno
