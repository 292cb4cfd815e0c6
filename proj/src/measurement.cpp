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

#include "zeno/measurement.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "zeno/geometry.hpp"
#include "zeno/kernels.hpp"

namespace zeno {

namespace {

// splitmix64; decorrelates per-trial streams derived from (seed, index).
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// xorshift-style generator over the mixed stream; uniform doubles in [0, 1).
class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::uint64_t trial)
      : state_(mix64(seed ^ mix64(trial + 1))) {}

  double uniform() {
    state_ = mix64(state_);
    return static_cast<double>(state_ >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

}  // namespace

ZenoProtocol::ZenoProtocol(double total_time, std::size_t n_measurements, State initial_state,
                           CollapseMode collapse_mode)
    : total_time_(total_time),
      n_(n_measurements),
      initial_state_(std::move(initial_state)),
      mode_(collapse_mode) {
  if (!(total_time_ > 0.0)) throw std::invalid_argument("ZenoProtocol: T must be > 0");
  if (n_ < 1) throw std::invalid_argument("ZenoProtocol: N must be >= 1");
  if (norm(initial_state_) <= zero_norm_threshold(initial_state_)) {
    throw ZeroNormError("ZenoProtocol: initial state has (near-)zero norm");
  }
}

double survival_probability(const State& psi0, const State& psi) {
  const State a = normalize(psi0);
  const State b = normalize(psi);
  const double p = std::norm(inner_product(a, b));
  if (p < -1e-12 || p > 1.0 + 1e-12) {
    throw NumericsError("survival_probability: value outside [0,1] beyond roundoff");
  }
  return std::min(1.0, std::max(0.0, p));
}

double short_time_k(const EvolutionModel& model, const State& psi0) {
  const double v = fs_speed(psi0, model.derivative(0.0, psi0));
  return v * v / 4.0;
}

ZenoResult zeno_run(const EvolutionModel& model, const ZenoProtocol& protocol, double dt,
                    StepMethod method) {
  if (!model.autonomous()) {
    throw UnsupportedError("zeno_run: the [P(tau)]^N product form needs an autonomous model");
  }
  const double tau = protocol.tau();
  if (!(dt > 0.0) || dt > tau / 10.0 * (1.0 + 1e-12)) {
    throw std::invalid_argument("zeno_run: dt must satisfy 0 < dt <= tau/10");
  }

  const State& psi0 = protocol.initial_state();
  ZenoResult result;
  result.v0 = fs_speed(psi0, model.derivative(0.0, psi0));
  result.k_initial = result.v0 * result.v0 / 4.0;
  result.asymptotic_estimate =
      zeno_asymptotic(result.v0, protocol.total_time(), protocol.n_measurements());

  const std::size_t n = protocol.n_measurements();
  result.per_step_survival.reserve(n);

  // Collapse resets to exactly psi0 and the model is autonomous, so segment i
  // is the segment [0, tau] again; the loop stays explicit to keep the
  // bookkeeping honest.
  std::vector<TimedState> first_segment;
  double cumulative = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    State psi = psi0;
    if (i == 0) {
      integrate(model, psi, 0.0, tau, dt, method, [&](double t, const State& s) {
        first_segment.push_back(TimedState{t, s});
      });
    } else {
      integrate(model, psi, 0.0, tau, dt, method, nullptr);
    }
    const double p = survival_probability(psi0, psi);
    result.per_step_survival.push_back(p);
    cumulative *= p;
  }
  result.cumulative_survival = cumulative;
  result.path_length_per_step = path_length(first_segment, model).total_length;
  return result;
}

double stochastic_zeno(const EvolutionModel& model, const ZenoProtocol& protocol,
                       std::size_t trials, std::uint64_t seed, double dt, StepMethod method) {
  if (protocol.collapse_mode() != CollapseMode::Stochastic) {
    throw UnsupportedError("stochastic_zeno: protocol is not in Stochastic mode");
  }
  if (trials < 1) throw std::invalid_argument("stochastic_zeno: trials must be >= 1");

  const ZenoResult det = zeno_run(model, protocol, dt, method);
  const std::vector<double>& p = det.per_step_survival;

  std::uint64_t survivors = 0;
  const std::int64_t n_trials = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(static) reduction(+ : survivors)
  for (std::int64_t trial = 0; trial < n_trials; ++trial) {
    TrialRng rng(seed, static_cast<std::uint64_t>(trial));
    bool alive = true;
    for (double pi : p) {
      if (rng.uniform() >= pi) {
        alive = false;
        break;
      }
    }
    if (alive) ++survivors;
  }
  return static_cast<double>(survivors) / static_cast<double>(trials);
}

double zeno_asymptotic(double v0, double total_time, std::size_t n_measurements) {
  if (!(v0 >= 0.0)) throw std::invalid_argument("zeno_asymptotic: v0 must be >= 0");
  if (!(total_time > 0.0)) throw std::invalid_argument("zeno_asymptotic: T must be > 0");
  if (n_measurements < 1) throw std::invalid_argument("zeno_asymptotic: N must be >= 1");
  const double t2v2 = total_time * total_time * v0 * v0;
  return std::exp(-t2v2 / (4.0 * static_cast<double>(n_measurements)));
}

bool zeno_criterion(std::span<const std::pair<std::size_t, double>> results) {
  if (results.size() < 2) {
    throw std::invalid_argument("zeno_criterion: need at least 2 (N, survival) entries");
  }
  for (std::size_t i = 1; i < results.size(); ++i) {
    if (results[i].first <= results[i - 1].first) {
      throw std::invalid_argument("zeno_criterion: N values must be strictly increasing");
    }
  }
  for (std::size_t i = 1; i < results.size(); ++i) {
    if (!(results[i].second > results[i - 1].second)) return false;
  }
  return true;
}

}  // namespace zeno
