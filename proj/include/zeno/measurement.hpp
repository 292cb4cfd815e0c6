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

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "zeno/dynamics.hpp"
#include "zeno/state.hpp"

// Survival probability under repeated projective measurement. A run divides
// the total time T into N segments of length tau = T/N; after each segment
// the projector |chi(0)><chi(0)| is measured. The survivor branch is reset to
// exactly the initial state; the orthogonal branch terminates a stochastic
// trajectory and is not evolved further.

namespace zeno {

enum class CollapseMode { Deterministic, Stochastic };

class ZenoProtocol {
 public:
  ZenoProtocol(double total_time, std::size_t n_measurements, State initial_state,
               CollapseMode collapse_mode);

  double total_time() const noexcept { return total_time_; }
  std::size_t n_measurements() const noexcept { return n_; }
  double tau() const noexcept { return total_time_ / static_cast<double>(n_); }
  const State& initial_state() const noexcept { return initial_state_; }
  CollapseMode collapse_mode() const noexcept { return mode_; }

 private:
  double total_time_;
  std::size_t n_;
  State initial_state_;
  CollapseMode mode_;
};

struct ZenoResult {
  std::vector<double> per_step_survival;  // N entries in [0, 1]
  double cumulative_survival = 1.0;       // product of the entries
  double k_initial = 0.0;                 // v0^2 / 4
  double v0 = 0.0;                        // initial Fubini-Study speed
  double path_length_per_step = 0.0;      // FS length of one segment, s(tau)
  double asymptotic_estimate = 1.0;       // exp(-T^2 v0^2 / (4N))
};

/// P = |<psi0/||psi0||, psi/||psi||>|^2, clamped into [0,1] within a 1e-12
/// roundoff window; values beyond the window raise NumericsError.
double survival_probability(const State& psi0, const State& psi);

/// Short-time decay constant k of P(tau) = 1 - k tau^2, computed as
/// fs_speed(psi0, dpsi/dt|_0)^2 / 4.
double short_time_k(const EvolutionModel& model, const State& psi0);

/// Deterministic repeated-measurement run: integrate each segment with fixed
/// step dt (dt <= tau/10 required), record the survival, collapse back to the
/// initial state, repeat N times.
ZenoResult zeno_run(const EvolutionModel& model, const ZenoProtocol& protocol, double dt,
                    StepMethod method = StepMethod::Rk4);

/// Monte Carlo realization of the collapse postulate: each trial survives
/// measurement i with the deterministically integrated probability P_i, and
/// the returned value is the fraction of trials surviving all N measurements.
/// Per-trial generators are seeded by (seed, trial index), so the result does
/// not depend on execution order; trials run in parallel.
double stochastic_zeno(const EvolutionModel& model, const ZenoProtocol& protocol,
                       std::size_t trials, std::uint64_t seed, double dt,
                       StepMethod method = StepMethod::Rk4);

/// exp(-T^2 v0^2 / (4N)), the large-N survival approximation.
double zeno_asymptotic(double v0, double total_time, std::size_t n_measurements);

/// Discrete Zeno criterion: true iff cumulative survival strictly increases
/// across the (strictly increasing) N grid.
bool zeno_criterion(std::span<const std::pair<std::size_t, double>> results);

}  // namespace zeno
