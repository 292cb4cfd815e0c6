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

#include "zeno/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <variant>

#include "zeno/fft.hpp"
#include "zeno/kernels.hpp"

namespace zeno {

namespace {

constexpr Complex kImag{0.0, 1.0};

std::string step_message(std::size_t step, double t) {
  std::ostringstream os;
  os << "integration diverged at step " << step << " (t = " << t << "): non-finite state";
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// Soliton

SolitonParams::SolitonParams(double eta, double u, double a, double b, double omega)
    : eta_(eta), u_(u), a_(a), b_(b), omega_(omega) {
  if (!(eta_ > 0.0)) throw std::invalid_argument("SolitonParams: eta must be > 0");
  if (!(a_ > 0.0)) throw std::invalid_argument("SolitonParams: a must be > 0");
  if (!(b_ > 0.0)) throw std::invalid_argument("SolitonParams: b must be > 0");
  const double disc = u_ * u_ - 2.0 * a_ * omega_;
  if (disc < 0.0) throw std::invalid_argument("SolitonParams: u^2 - 2 a omega must be >= 0");
  const double eta_derived = std::sqrt(disc) / a_;
  if (std::abs(eta_derived - eta_) > 1e-12 * std::max(1.0, eta_)) {
    throw std::invalid_argument("SolitonParams: eta inconsistent with (u, a, omega)");
  }
}

SolitonParams SolitonParams::from_eta(double eta, double u, double a, double b) {
  if (!(eta > 0.0) || !(a > 0.0)) {
    throw std::invalid_argument("SolitonParams: eta and a must be > 0");
  }
  const double omega = (u * u - a * a * eta * eta) / (2.0 * a);
  return SolitonParams(eta, u, a, b, omega);
}

GridState soliton_state(const SolitonParams& p, double t, const GridSpec& grid) {
  const double center = p.u() * t;
  for (double x_edge : {grid.x_min, grid.x_max}) {
    if (1.0 / std::cosh(p.eta() * (x_edge - center)) >= 1e-12) {
      throw GridError("soliton_state: envelope exceeds 1e-12 at the grid boundary");
    }
  }
  const double amp = std::sqrt(p.a() / p.b()) * p.eta();
  std::vector<Complex> v(grid.n_points);
  for (std::size_t i = 0; i < grid.n_points; ++i) {
    const double x = grid.x(i);
    const double phase = -(p.omega() * t - p.u() * x / p.a());
    v[i] = amp * std::polar(1.0, phase) / std::cosh(p.eta() * (x - center));
  }
  return GridState(grid.x_min, grid.x_max, std::move(v));
}

GridState soliton_time_derivative(const SolitonParams& p, double t, const GridSpec& grid) {
  // d/dt Psi = (-i omega + u eta tanh(eta (x - u t))) Psi
  GridState psi = soliton_state(p, t, grid);
  std::vector<Complex> v = psi.samples();
  for (std::size_t i = 0; i < grid.n_points; ++i) {
    const double x = grid.x(i);
    const double tanh_term = std::tanh(p.eta() * (x - p.u() * t));
    v[i] *= Complex{p.u() * p.eta() * tanh_term, -p.omega()};
  }
  return GridState(grid.x_min, grid.x_max, std::move(v));
}

// ---------------------------------------------------------------------------
// Model implementation

struct EvolutionModel::NlseWorkspace {
  FftPlan plan;
  std::vector<double> k2;  // squared wavenumber per FFT bin

  explicit NlseWorkspace(const GridSpec& grid) : plan(grid.n_points), k2(grid.n_points) {
    const std::size_t n = grid.n_points;
    const double dk = 2.0 * std::numbers::pi / grid.length();
    for (std::size_t j = 0; j < n; ++j) {
      const double m = (j <= n / 2) ? static_cast<double>(j)
                                    : static_cast<double>(j) - static_cast<double>(n);
      const double k = dk * m;
      k2[j] = k * k;
    }
  }
};

struct EvolutionModel::Impl {
  using ParamVariant =
      std::variant<LinearParams, GisinTwoLevelParams, GisinGeneralParams, NlseParams>;

  ParamVariant params;
  std::unique_ptr<const NlseWorkspace> nlse_ws;  // Nlse1d only

  explicit Impl(ParamVariant p) : params(std::move(p)) {}
};

EvolutionModel EvolutionModel::linear(HermitianMatrix hamiltonian) {
  return EvolutionModel(std::make_shared<Impl>(LinearParams{std::move(hamiltonian)}));
}

EvolutionModel EvolutionModel::gisin_two_level(double alpha, double lambda, double omega) {
  if (!(alpha >= 0.0)) throw std::invalid_argument("gisin_two_level: alpha must be >= 0");
  if (!(lambda >= 0.0)) throw std::invalid_argument("gisin_two_level: lambda must be >= 0");
  if (!std::isfinite(omega)) throw std::invalid_argument("gisin_two_level: omega must be finite");
  return EvolutionModel(std::make_shared<Impl>(GisinTwoLevelParams{alpha, lambda, omega}));
}

EvolutionModel EvolutionModel::gisin_general(HermitianMatrix hamiltonian, double lambda) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("gisin_general: lambda must be >= 0");
  return EvolutionModel(
      std::make_shared<Impl>(GisinGeneralParams{std::move(hamiltonian), lambda}));
}

EvolutionModel EvolutionModel::nlse(NlseParams params) {
  if (!(params.mass > 0.0)) throw std::invalid_argument("nlse: mass must be > 0");
  const std::size_t n = params.grid.n_points;
  if (n < 8 || (n & (n - 1)) != 0) {
    throw std::invalid_argument("nlse: grid n_points must be a power of two >= 8");
  }
  if (!(params.grid.x_max > params.grid.x_min)) {
    throw std::invalid_argument("nlse: grid x_max must exceed x_min");
  }
  if (!params.potential.empty() && params.potential.size() != n) {
    throw DimensionError("nlse: potential sample count does not match the grid");
  }
  for (double v : params.potential) {
    if (!std::isfinite(v)) throw NumericsError("nlse: non-finite potential sample");
  }
  const GridSpec grid = params.grid;
  auto impl = std::make_shared<Impl>(std::move(params));
  impl->nlse_ws = std::make_unique<const NlseWorkspace>(grid);
  return EvolutionModel(std::move(impl));
}

ModelKind EvolutionModel::kind() const noexcept {
  switch (impl_->params.index()) {
    case 0: return ModelKind::Linear;
    case 1: return ModelKind::GisinTwoLevel;
    case 2: return ModelKind::GisinGeneral;
    default: return ModelKind::Nlse1d;
  }
}

const GridSpec* EvolutionModel::grid() const noexcept {
  if (const auto* p = std::get_if<NlseParams>(&impl_->params)) return &p->grid;
  return nullptr;
}

const LinearParams& EvolutionModel::linear_params() const {
  return std::get<LinearParams>(impl_->params);
}
const GisinTwoLevelParams& EvolutionModel::gisin_two_level_params() const {
  return std::get<GisinTwoLevelParams>(impl_->params);
}
const GisinGeneralParams& EvolutionModel::gisin_general_params() const {
  return std::get<GisinGeneralParams>(impl_->params);
}
const NlseParams& EvolutionModel::nlse_params() const {
  return std::get<NlseParams>(impl_->params);
}

namespace {

std::vector<Complex> linear_rhs(const HermitianMatrix& h, const std::vector<Complex>& x) {
  std::vector<Complex> out = h.apply(x);
  kernels::scale_in_place(out, -kImag);
  return out;
}

std::vector<Complex> gisin_two_level_rhs(const GisinTwoLevelParams& p,
                                         const std::vector<Complex>& x) {
  const Complex a = x[0];
  const Complex b = x[1];
  const double abs_b2 = std::norm(b);
  const double re_ab = (std::conj(a) * b).real();  // (a*b + ab*)/2
  const Complex drive = 0.5 * p.alpha * Complex{p.lambda, 1.0};
  const double damp_a = p.lambda * (p.omega * abs_b2 - p.alpha * re_ab);
  const double damp_b = p.lambda * (p.omega * (abs_b2 - 1.0) - p.alpha * re_ab);
  return {drive * b + damp_a * a, drive * a + damp_b * b};
}

std::vector<Complex> gisin_general_rhs(const GisinGeneralParams& p,
                                       const std::vector<Complex>& x) {
  const std::vector<Complex> hx = p.hamiltonian.apply(x);
  const double n2 = kernels::sum_abs2(x);
  if (n2 <= 0.0) throw ZeroNormError("gisin_general: zero state has no mean energy");
  const double mean_h = kernels::cdot(x, hx).real() / n2;
  std::vector<Complex> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = -kImag * hx[i] + p.lambda * (mean_h * x[i] - hx[i]);
  }
  return out;
}

}  // namespace

State EvolutionModel::derivative(double /*t*/, const State& psi) const {
  switch (kind()) {
    case ModelKind::Linear: {
      const auto* f = std::get_if<FiniteState>(&psi);
      if (f == nullptr || f->dim() != linear_params().hamiltonian.dim()) {
        throw DimensionError("derivative: state does not match the linear model");
      }
      return FiniteState(linear_rhs(linear_params().hamiltonian, f->amps()));
    }
    case ModelKind::GisinTwoLevel: {
      const auto* f = std::get_if<FiniteState>(&psi);
      if (f == nullptr || f->dim() != 2) {
        throw DimensionError("derivative: Gisin two-level model needs a dimension-2 state");
      }
      return FiniteState(gisin_two_level_rhs(gisin_two_level_params(), f->amps()));
    }
    case ModelKind::GisinGeneral: {
      const auto* f = std::get_if<FiniteState>(&psi);
      if (f == nullptr || f->dim() != gisin_general_params().hamiltonian.dim()) {
        throw DimensionError("derivative: state does not match the Gisin model");
      }
      return FiniteState(gisin_general_rhs(gisin_general_params(), f->amps()));
    }
    case ModelKind::Nlse1d: {
      const auto* g = std::get_if<GridState>(&psi);
      const NlseParams& p = nlse_params();
      if (g == nullptr || !p.grid.matches(*g)) {
        throw DimensionError("derivative: state does not match the NLSE grid");
      }
      const NlseWorkspace& ws = *impl_->nlse_ws;
      std::vector<Complex> d2 = g->samples();
      ws.plan.forward(d2);
      for (std::size_t j = 0; j < d2.size(); ++j) d2[j] *= -ws.k2[j];
      ws.plan.inverse(d2);

      const double inv_2m = 0.5 / p.mass;
      const std::vector<Complex>& s = g->samples();
      std::vector<Complex> out(s.size());
      const bool has_v = !p.potential.empty();
      for (std::size_t i = 0; i < s.size(); ++i) {
        Complex rhs = inv_2m * d2[i] + p.b * std::norm(s[i]) * s[i];
        if (has_v) rhs -= p.potential[i] * s[i];
        out[i] = kImag * rhs;
      }
      return GridState(g->x_min(), g->x_max(), std::move(out));
    }
  }
  throw UnsupportedError("derivative: unknown model kind");
}

// ---------------------------------------------------------------------------
// Integrators

namespace {

State rk4_step(const EvolutionModel& model, double t, const State& y, double h) {
  const std::vector<Complex>& y0 = coords(y);
  const State k1 = model.derivative(t, y);

  std::vector<Complex> stage(y0.size());
  kernels::assign_sum_scaled(stage, y0, 0.5 * h, coords(k1));
  const State k2 = model.derivative(t + 0.5 * h, with_coords(y, std::move(stage)));

  stage.assign(y0.size(), Complex{});
  kernels::assign_sum_scaled(stage, y0, 0.5 * h, coords(k2));
  const State k3 = model.derivative(t + 0.5 * h, with_coords(y, std::move(stage)));

  stage.assign(y0.size(), Complex{});
  kernels::assign_sum_scaled(stage, y0, h, coords(k3));
  const State k4 = model.derivative(t + h, with_coords(y, std::move(stage)));

  std::vector<Complex> out = y0;
  kernels::rk4_combine(out, coords(k1), coords(k2), coords(k3), coords(k4), h);
  return with_coords(y, std::move(out));
}

// Strang splitting for the NLSE: half kinetic step in k-space, full
// nonlinear+potential phase rotation in x-space, half kinetic step.
class SplitStepper {
 public:
  SplitStepper(const EvolutionModel& model, const FftPlan& plan, const std::vector<double>& k2)
      : params_(model.nlse_params()), plan_(plan), k2_(k2) {}

  GridState step(const GridState& y, double h) {
    ensure_tables(h);
    std::vector<Complex> v = y.samples();

    plan_.forward(v);
    kernels::cmul_in_place(v, kinetic_half_);
    plan_.inverse(v);

    const bool has_v = !params_.potential.empty();
    for (std::size_t i = 0; i < v.size(); ++i) {
      double phase = -params_.b * std::norm(v[i]);
      if (has_v) phase += params_.potential[i];
      v[i] *= std::polar(1.0, -phase * h);
    }

    plan_.forward(v);
    kernels::cmul_in_place(v, kinetic_half_);
    plan_.inverse(v);

    return GridState(y.x_min(), y.x_max(), std::move(v));
  }

 private:
  void ensure_tables(double h) {
    if (h == cached_h_) return;
    const double inv_2m = 0.5 / params_.mass;
    kinetic_half_.resize(k2_.size());
    for (std::size_t j = 0; j < k2_.size(); ++j) {
      kinetic_half_[j] = std::polar(1.0, -inv_2m * k2_[j] * 0.5 * h);
    }
    cached_h_ = h;
  }

  const NlseParams& params_;
  const FftPlan& plan_;
  const std::vector<double>& k2_;
  std::vector<Complex> kinetic_half_;
  double cached_h_ = -1.0;
};

}  // namespace

void integrate(const EvolutionModel& model, State& psi, double t0, double t1, double dt,
               StepMethod method, const std::function<void(double, const State&)>& observer) {
  if (!(t1 > t0)) throw std::invalid_argument("integrate: t1 must exceed t0");
  if (!(dt > 0.0)) throw std::invalid_argument("integrate: dt must be > 0");
  if (dt > (t1 - t0) * (1.0 + 1e-12)) {
    throw std::invalid_argument("integrate: dt must not exceed t1 - t0");
  }
  if (method == StepMethod::SplitStep && model.kind() != ModelKind::Nlse1d) {
    throw UnsupportedError("integrate: split-step is only available for the NLSE model");
  }

  const double span = t1 - t0;
  const std::size_t n_steps =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(span / dt - 1e-12)));

  if (observer) observer(t0, psi);

  // Split-step keeps its own plan and phase tables for the duration of the call.
  std::optional<SplitStepper> splitter;
  std::unique_ptr<FftPlan> local_plan;
  std::vector<double> local_k2;
  if (method == StepMethod::SplitStep) {
    const GridSpec& g = *model.grid();
    local_plan = std::make_unique<FftPlan>(g.n_points);
    local_k2.resize(g.n_points);
    const double dk = 2.0 * std::numbers::pi / g.length();
    for (std::size_t j = 0; j < g.n_points; ++j) {
      const double m = (j <= g.n_points / 2)
                           ? static_cast<double>(j)
                           : static_cast<double>(j) - static_cast<double>(g.n_points);
      local_k2[j] = (dk * m) * (dk * m);
    }
    splitter.emplace(model, *local_plan, local_k2);
  }

  for (std::size_t step = 0; step < n_steps; ++step) {
    const double t = t0 + static_cast<double>(step) * dt;
    const bool last = (step + 1 == n_steps);
    const double h = last ? (t1 - t) : dt;
    const double t_next = last ? t1 : t0 + static_cast<double>(step + 1) * dt;

    try {
      if (method == StepMethod::Rk4) {
        psi = rk4_step(model, t, psi, h);
      } else {
        psi = splitter->step(std::get<GridState>(psi), h);
      }
    } catch (const NumericsError&) {
      throw DivergenceError(step_message(step, t));
    }
    if (!kernels::all_finite(coords(psi))) {
      throw DivergenceError(step_message(step, t));
    }
    if (observer) observer(t_next, psi);
  }
}

std::vector<TimedState> evolve(const EvolutionModel& model, const State& psi0, double t0,
                               double t1, double dt, StepMethod method) {
  std::vector<TimedState> traj;
  State psi = psi0;
  integrate(model, psi, t0, t1, dt, method,
            [&traj](double t, const State& s) { traj.push_back(TimedState{t, s}); });
  return traj;
}

State evolve_final(const EvolutionModel& model, const State& psi0, double t0, double t1,
                   double dt, StepMethod method) {
  State psi = psi0;
  integrate(model, psi, t0, t1, dt, method, nullptr);
  return psi;
}

double energy_uncertainty(const HermitianMatrix& hamiltonian, const State& psi) {
  const auto* f = std::get_if<FiniteState>(&psi);
  if (f == nullptr || f->dim() != hamiltonian.dim()) {
    throw DimensionError("energy_uncertainty: state does not match the Hamiltonian");
  }
  const State normalized = normalize(psi);
  const std::vector<Complex>& x = coords(normalized);
  const std::vector<Complex> hx = hamiltonian.apply(x);
  const std::vector<Complex> hhx = hamiltonian.apply(hx);
  const double mean_h = kernels::cdot(x, hx).real();
  const double mean_h2 = kernels::cdot(x, hhx).real();
  const double var = mean_h2 - mean_h * mean_h;
  return std::sqrt(std::max(0.0, var));
}

}  // namespace zeno
