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
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "zeno/hermitian.hpp"
#include "zeno/state.hpp"

// Concrete evolution models behind one derivative/evolve interface. All
// models work in hbar = 1 units: energies and frequencies are 1/time. Each
// model preserves the state norm along its flow. Models are immutable after
// construction; derivative and the integrators are pure, so independent
// evolutions may run concurrently.

namespace zeno {

enum class ModelKind { Linear, GisinTwoLevel, GisinGeneral, Nlse1d };
enum class StepMethod { Rk4, SplitStep };

/// Schroedinger flow psi' = -i H psi.
struct LinearParams {
  HermitianMatrix hamiltonian;
};

/// Resonantly driven, damped two-level atom in the rotating representation:
/// the state holds (a, b) with
///   a' = (alpha/2)(lambda + i) b + lambda [omega |b|^2 - (alpha/2)(a*b + ab*)] a
///   b' = (alpha/2)(lambda + i) a + lambda [omega (|b|^2 - 1) - (alpha/2)(a*b + ab*)] b
/// Valid on the unit sphere |a|^2 + |b|^2 = 1.
struct GisinTwoLevelParams {
  double alpha;   // Rabi frequency, >= 0
  double lambda;  // dimensionless damping, >= 0
  double omega;   // atomic transition frequency; enters only the damping terms
};

/// Norm-preserving dissipative flow psi' = -iH psi + lambda(<H> - H) psi,
/// <H> = <psi|H|psi> / <psi|psi>.
struct GisinGeneralParams {
  HermitianMatrix hamiltonian;
  double lambda;  // >= 0
};

/// Uniform periodic grid geometry shared by NLSE states.
struct GridSpec {
  double x_min;
  double x_max;
  std::size_t n_points;  // power of two >= 8

  double dx() const noexcept { return (x_max - x_min) / static_cast<double>(n_points); }
  double length() const noexcept { return x_max - x_min; }
  double x(std::size_t i) const noexcept { return x_min + static_cast<double>(i) * dx(); }
  bool matches(const GridState& s) const noexcept {
    return s.n_points() == n_points && s.x_min() == x_min && s.x_max() == x_max;
  }
};

/// 1-D cubic nonlinear Schroedinger flow
///   i psi_t = -(1/2m) psi_xx + V(x) psi - b |psi|^2 psi
/// with the second derivative computed spectrally. b < 0 (defocusing) is
/// accepted but has no soliton oracle; treat it as experimental.
struct NlseParams {
  double mass;                    // > 0
  double b;                       // nonlinearity
  std::vector<double> potential;  // V sampled on the grid; empty means V = 0
  GridSpec grid;
};

/// Parameters of the traveling bright soliton
///   Psi(x,t) = sqrt(a/b) eta exp(-i(omega t - u x / a)) sech(eta (x - u t)),
/// a = hbar^2/m, eta = (1/a) sqrt(u^2 - 2 a omega).
class SolitonParams {
 public:
  SolitonParams(double eta, double u, double a, double b, double omega);

  /// Derives omega from the dispersion constraint.
  static SolitonParams from_eta(double eta, double u, double a, double b);

  double eta() const noexcept { return eta_; }
  double u() const noexcept { return u_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double omega() const noexcept { return omega_; }
  double mass() const noexcept { return 1.0 / a_; }

 private:
  double eta_, u_, a_, b_, omega_;
};

class EvolutionModel {
 public:
  static EvolutionModel linear(HermitianMatrix hamiltonian);
  static EvolutionModel gisin_two_level(double alpha, double lambda, double omega);
  static EvolutionModel gisin_general(HermitianMatrix hamiltonian, double lambda);
  static EvolutionModel nlse(NlseParams params);

  ModelKind kind() const noexcept;
  /// All four kinds are autonomous in the representations used here.
  bool autonomous() const noexcept { return true; }

  /// dpsi/dt at (t, psi). Shape-preserving; throws DimensionError on
  /// mismatch and NumericsError if the result is not finite.
  State derivative(double t, const State& psi) const;

  const GridSpec* grid() const noexcept;  // non-null for Nlse1d only

  const LinearParams& linear_params() const;
  const GisinTwoLevelParams& gisin_two_level_params() const;
  const GisinGeneralParams& gisin_general_params() const;
  const NlseParams& nlse_params() const;

 private:
  struct NlseWorkspace;
  struct Impl;
  explicit EvolutionModel(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

struct TimedState {
  double t;
  State state;
};

/// Core fixed-step integrator. Advances psi from t0 to t1 with step dt (the
/// last step is shortened to land on t1 exactly) and calls the observer at
/// t0 and after every step. Throws DivergenceError naming the step if the
/// state stops being finite.
void integrate(const EvolutionModel& model, State& psi, double t0, double t1, double dt,
               StepMethod method, const std::function<void(double, const State&)>& observer);

/// Full sampled trajectory including both endpoints.
std::vector<TimedState> evolve(const EvolutionModel& model, const State& psi0, double t0,
                               double t1, double dt, StepMethod method = StepMethod::Rk4);

/// Final state only.
State evolve_final(const EvolutionModel& model, const State& psi0, double t0, double t1,
                   double dt, StepMethod method = StepMethod::Rk4);

/// Analytic soliton sampled on the grid at time t. Requires the envelope to
/// be below 1e-12 at both grid edges (GridError otherwise).
GridState soliton_state(const SolitonParams& p, double t, const GridSpec& grid);

/// Analytic time derivative of the soliton, for oracle use.
GridState soliton_time_derivative(const SolitonParams& p, double t, const GridSpec& grid);

/// Delta E = sqrt(<H^2> - <H>^2) on the normalized state (normalizes first).
double energy_uncertainty(const HermitianMatrix& hamiltonian, const State& psi);

}  // namespace zeno
