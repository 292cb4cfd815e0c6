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

#include <cmath>
#include <random>

#include "test_util.hpp"
#include "zeno/dynamics.hpp"
#include "zeno/geometry.hpp"
#include "zeno/kernels.hpp"

using zeno::Complex;
using zeno::FiniteState;
using zeno::GridState;
using zeno::State;

namespace {

double fidelity(const State& a, const State& b) {
  const double overlap = std::abs(zeno::inner_product(zeno::normalize(a), zeno::normalize(b)));
  return overlap * overlap;
}

// Lab-frame two-level Hamiltonian with the resonant drive, standard
// raising/lowering pairing S+ = |e><g| (the pairing that reproduces the
// rotating-representation equations exactly). Basis order (g, e).
zeno::HermitianMatrix lab_frame_hamiltonian(double alpha, double omega, double t) {
  const Complex h_eg = -0.5 * alpha * std::polar(1.0, -omega * t);  // <e|H|g>
  return zeno::HermitianMatrix(
      2, {Complex{0.0, 0.0}, std::conj(h_eg), h_eg, Complex{omega, 0.0}});
}

}  // namespace

TEST_CASE("two-level damped derivative at the ground state") {
  const auto model = zeno::EvolutionModel::gisin_two_level(1.0, 0.5, 2.0);
  const State psi = FiniteState::basis(2, 0);
  const State dot = model.derivative(0.0, psi);
  CHECK(std::abs(zeno::coords(dot)[0]) < 1e-15);
  CHECK(zeno::coords(dot)[1].real() == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(zeno::coords(dot)[1].imag() == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("linear derivative of an eigenstate is a phase rotation") {
  const auto model = zeno::EvolutionModel::linear(zeno::HermitianMatrix::diagonal({1.0, 2.0}));
  const State psi = FiniteState::basis(2, 0);
  const State dot = model.derivative(0.0, psi);
  CHECK(zeno::coords(dot)[0] == Complex{0.0, -1.0});
  CHECK(std::abs(zeno::coords(dot)[1]) == 0.0);
}

TEST_CASE("NLSE derivative matches the analytic soliton time derivative") {
  const zeno::GridSpec grid{-40.0, 40.0, 2048};
  const auto p = zeno::SolitonParams::from_eta(1.0, 2.0, 1.0, 1.0);
  const auto model = zeno::EvolutionModel::nlse({p.mass(), p.b(), {}, grid});

  const GridState psi = zeno::soliton_state(p, 0.0, grid);
  const GridState exact = zeno::soliton_time_derivative(p, 0.0, grid);
  const State numeric = model.derivative(0.0, psi);

  double max_err = 0.0;
  for (std::size_t i = 0; i < grid.n_points; ++i) {
    max_err = std::max(max_err, std::abs(zeno::coords(numeric)[i] - exact.samples()[i]));
  }
  CHECK(max_err < 1e-8);
}

TEST_CASE("NLSE potential enters as -i V psi") {
  const zeno::GridSpec grid{-10.0, 10.0, 256};
  std::vector<double> v(grid.n_points);
  for (std::size_t i = 0; i < grid.n_points; ++i) v[i] = 0.5 * grid.x(i) * grid.x(i);

  std::mt19937_64 rng(3);
  const GridState psi = zeno::test::smooth_random_grid(rng, grid, 8);
  const auto free_model = zeno::EvolutionModel::nlse({1.0, 1.0, {}, grid});
  const auto trapped = zeno::EvolutionModel::nlse({1.0, 1.0, v, grid});

  const auto& d_free = zeno::coords(free_model.derivative(0.0, psi));
  const auto& d_trap = zeno::coords(trapped.derivative(0.0, psi));
  for (std::size_t i = 0; i < grid.n_points; ++i) {
    const Complex expected = d_free[i] - Complex{0.0, 1.0} * v[i] * psi.samples()[i];
    CHECK(std::abs(d_trap[i] - expected) < 1e-10);
  }
}

TEST_CASE("derivative rejects mismatched states") {
  const auto model = zeno::EvolutionModel::gisin_two_level(1.0, 0.5, 0.0);
  CHECK_THROWS_AS(model.derivative(0.0, State(FiniteState::basis(3, 0))), zeno::DimensionError);

  const zeno::GridSpec grid{-40.0, 40.0, 2048};
  const auto nlse = zeno::EvolutionModel::nlse({1.0, 1.0, {}, grid});
  CHECK_THROWS_AS(nlse.derivative(0.0, State(FiniteState::basis(2, 0))), zeno::DimensionError);
  std::vector<Complex> wrong(1024, Complex{0.1, 0.0});
  CHECK_THROWS_AS(nlse.derivative(0.0, State(GridState(-40.0, 40.0, wrong))),
                  zeno::DimensionError);
}

TEST_CASE("norm is conserved at the derivative level for all four models") {
  std::mt19937_64 rng(99);

  SUBCASE("linear") {
    for (int trial = 0; trial < 50; ++trial) {
      const auto h = zeno::test::random_hermitian(rng, 2 + trial % 6);
      const auto model = zeno::EvolutionModel::linear(h);
      const State psi = zeno::test::random_finite_state(rng, h.dim());
      const double n2 = std::pow(zeno::norm(psi), 2);
      CHECK(std::abs(zeno::inner_product(psi, model.derivative(0.0, psi)).real()) <=
            1e-12 * n2);
    }
  }

  SUBCASE("gisin general") {
    for (int trial = 0; trial < 50; ++trial) {
      const auto h = zeno::test::random_hermitian(rng, 2 + trial % 6);
      const auto model = zeno::EvolutionModel::gisin_general(h, 0.4 + 0.1 * (trial % 5));
      const State psi = zeno::test::random_finite_state(rng, h.dim());
      const double n2 = std::pow(zeno::norm(psi), 2);
      CHECK(std::abs(zeno::inner_product(psi, model.derivative(0.0, psi)).real()) <=
            1e-12 * n2);
    }
  }

  SUBCASE("gisin two-level (unit sphere)") {
    for (int trial = 0; trial < 50; ++trial) {
      const auto model = zeno::EvolutionModel::gisin_two_level(1.3, 0.7, 5.0);
      const State psi = zeno::test::random_unit_state(rng, 2);
      CHECK(std::abs(zeno::inner_product(psi, model.derivative(0.0, psi)).real()) <= 1e-12);
    }
  }

  SUBCASE("nlse") {
    const zeno::GridSpec grid{-40.0, 40.0, 1024};
    const auto model = zeno::EvolutionModel::nlse({0.8, 1.5, {}, grid});
    for (int trial = 0; trial < 20; ++trial) {
      const State psi = zeno::test::smooth_random_grid(rng, grid, 16);
      const double n2 = std::pow(zeno::norm(psi), 2);
      CHECK(std::abs(zeno::inner_product(psi, model.derivative(0.0, psi)).real()) <=
            1e-12 * n2);
    }
  }
}

TEST_CASE("gisin general with lambda = 0 reduces to the linear flow") {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t dim = 2 + trial % 6;
    const auto h = zeno::test::random_hermitian(rng, dim);
    const auto gisin = zeno::EvolutionModel::gisin_general(h, 0.0);
    const auto linear = zeno::EvolutionModel::linear(h);
    const State psi = zeno::test::random_finite_state(rng, dim);
    const auto& dg = zeno::coords(gisin.derivative(0.0, psi));
    const auto& dl = zeno::coords(linear.derivative(0.0, psi));
    for (std::size_t i = 0; i < dim; ++i) CHECK(std::abs(dg[i] - dl[i]) <= 1e-14);
  }
}

TEST_CASE("two-level damped flow with omega=0 equals the general flow for H=-(alpha/2)sx") {
  std::mt19937_64 rng(321);
  const double alpha = 1.4;
  const double lambda = 0.6;
  const auto two_level = zeno::EvolutionModel::gisin_two_level(alpha, lambda, 0.0);
  const zeno::HermitianMatrix h(
      2, {Complex{0.0, 0.0}, Complex{-0.5 * alpha, 0.0}, Complex{-0.5 * alpha, 0.0},
          Complex{0.0, 0.0}});
  const auto general = zeno::EvolutionModel::gisin_general(h, lambda);
  for (int trial = 0; trial < 50; ++trial) {
    const State psi = zeno::test::random_unit_state(rng, 2);
    const auto& da = zeno::coords(two_level.derivative(0.0, psi));
    const auto& db = zeno::coords(general.derivative(0.0, psi));
    CHECK(std::abs(da[0] - db[0]) <= 1e-14);
    CHECK(std::abs(da[1] - db[1]) <= 1e-14);
  }
}

TEST_CASE("Rabi half-period inversion") {
  const double alpha = 1.0;
  const zeno::HermitianMatrix h(
      2, {Complex{0.0, 0.0}, Complex{0.5 * alpha, 0.0}, Complex{0.5 * alpha, 0.0},
          Complex{0.0, 0.0}});
  const auto model = zeno::EvolutionModel::linear(h);
  const State psi0 = FiniteState::basis(2, 0);
  const double t1 = std::numbers::pi / alpha;
  const State final = zeno::evolve_final(model, psi0, 0.0, t1, 1e-3);
  CHECK(fidelity(final, FiniteState::basis(2, 1)) > 1.0 - 1e-8);
}

TEST_CASE("evolve matches the exact Rabi solution along the way") {
  const double alpha = 1.0;
  const zeno::HermitianMatrix h(
      2, {Complex{0.0, 0.0}, Complex{0.5 * alpha, 0.0}, Complex{0.5 * alpha, 0.0},
          Complex{0.0, 0.0}});
  const auto model = zeno::EvolutionModel::linear(h);
  const auto traj = zeno::evolve(model, FiniteState::basis(2, 0), 0.0, 2.0, 1e-3);
  CHECK(traj.front().t == 0.0);
  CHECK(traj.back().t == 2.0);
  for (std::size_t i = 0; i < traj.size(); i += 137) {
    const State exact = zeno::test::rabi_state(alpha, traj[i].t);
    const auto& got = zeno::coords(traj[i].state);
    const auto& want = zeno::coords(exact);
    CHECK(std::abs(got[0] - want[0]) < 1e-9);
    CHECK(std::abs(got[1] - want[1]) < 1e-9);
  }
}

TEST_CASE("two-level damped short-time transition probability") {
  // |b(t1)|^2 = (alpha^2/4)(lambda^2+1) t1^2 at leading order (omega = 0).
  const double alpha = 1.0;
  const double lambda = 0.5;
  const auto model = zeno::EvolutionModel::gisin_two_level(alpha, lambda, 0.0);
  const double t1 = 1e-2;
  const State final = zeno::evolve_final(model, FiniteState::basis(2, 0), 0.0, t1, 1e-4);
  const double b2 = std::norm(zeno::coords(final)[1]);
  const double expected = 0.25 * alpha * alpha * (lambda * lambda + 1.0) * t1 * t1;
  CHECK(b2 == doctest::Approx(expected).epsilon(5e-3));
  CHECK(expected == doctest::Approx(3.125e-5).epsilon(1e-12));
}

TEST_CASE("two-level short-time ratio extrapolates to alpha^2(lambda^2+1)/4") {
  const double alpha = 1.3;
  const double lambda = 0.7;
  const double omega = 1.1;
  const auto model = zeno::EvolutionModel::gisin_two_level(alpha, lambda, omega);
  const State psi0 = FiniteState::basis(2, 0);

  double raw[3];
  const double tau0 = 5e-3;
  for (int level = 0; level < 3; ++level) {
    const double tau = tau0 * std::pow(0.5, level);
    const State final = zeno::evolve_final(model, psi0, 0.0, tau, tau / 200.0);
    raw[level] = std::norm(zeno::coords(final)[1]) / (tau * tau);
  }
  const double r01 = 2.0 * raw[1] - raw[0];
  const double r12 = 2.0 * raw[2] - raw[1];
  const double extrapolated = (4.0 * r12 - r01) / 3.0;
  const double expected = 0.25 * alpha * alpha * (lambda * lambda + 1.0);
  CHECK(extrapolated == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("rk4 is fourth order on the damped two-level flow") {
  const auto model = zeno::EvolutionModel::gisin_two_level(6.0, 1.0, 0.0);
  const State psi0 = FiniteState::basis(2, 0);
  const double t1 = 1.0;
  const double dt = 0.02;

  auto final_err = [&](double step, const State& ref) {
    const State f = zeno::evolve_final(model, psi0, 0.0, t1, step);
    double err = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
      err = std::max(err, std::abs(zeno::coords(f)[i] - zeno::coords(ref)[i]));
    }
    return err;
  };

  const State ref = zeno::evolve_final(model, psi0, 0.0, t1, dt / 16.0);
  const double e1 = final_err(dt, ref);
  const double e2 = final_err(dt / 2.0, ref);
  REQUIRE(e1 > 1e-13);  // above roundoff, so the ratio is meaningful
  const double ratio = e1 / e2;
  CHECK(ratio >= 12.0);
  CHECK(ratio <= 20.0);
}

TEST_CASE("NLSE evolution follows the analytic soliton") {
  const zeno::GridSpec grid{-40.0, 40.0, 2048};
  const auto p = zeno::SolitonParams::from_eta(1.0, 2.0, 1.0, 1.0);
  const auto model = zeno::EvolutionModel::nlse({p.mass(), p.b(), {}, grid});
  const GridState psi0 = zeno::soliton_state(p, 0.0, grid);

  const State final = zeno::evolve_final(model, psi0, 0.0, 1.0, 2.5e-4);
  const GridState exact = zeno::soliton_state(p, 1.0, grid);
  CHECK(fidelity(final, exact) > 1.0 - 1e-6);

  const double drift =
      std::abs(zeno::norm(final) - zeno::norm(State(psi0))) / zeno::norm(State(psi0));
  CHECK(drift < 1e-8);
}

TEST_CASE("split-step agrees with rk4 on the soliton scenario") {
  const zeno::GridSpec grid{-40.0, 40.0, 2048};
  const auto p = zeno::SolitonParams::from_eta(1.0, 2.0, 1.0, 1.0);
  const auto model = zeno::EvolutionModel::nlse({p.mass(), p.b(), {}, grid});
  const GridState psi0 = zeno::soliton_state(p, 0.0, grid);

  const State rk4 = zeno::evolve_final(model, psi0, 0.0, 1.0, 2.5e-4, zeno::StepMethod::Rk4);
  const State split =
      zeno::evolve_final(model, psi0, 0.0, 1.0, 2.5e-4, zeno::StepMethod::SplitStep);
  CHECK(1.0 - fidelity(rk4, split) < 1e-6);

  const double drift = std::abs(zeno::norm(split) - zeno::norm(State(psi0)));
  CHECK(drift < 1e-10);  // split-step rotates phases only
}

TEST_CASE("rotating representation matches the lab frame with explicit phase bookkeeping") {
  // Integrate the damped flow in the lab frame with the instantaneous H(t)
  // and compare survival against the rotating-representation equations. The
  // ground-state amplitude is shared by both representations.
  const double alpha = 1.0;
  const double lambda = 0.5;
  const double omega = 3.0;
  const double tau = 0.5;
  const double dt = 1e-4;

  const auto rotating = zeno::EvolutionModel::gisin_two_level(alpha, lambda, omega);
  const State psi0 = FiniteState::basis(2, 0);
  const State rot_final = zeno::evolve_final(rotating, psi0, 0.0, tau, dt);
  const double survival_rotating = std::norm(zeno::coords(rot_final)[0]);

  // Test-local RK4 in the lab frame; the Gisin flow is evaluated with H(t)
  // frozen at each stage time.
  auto rhs = [&](double t, const State& psi) -> State {
    return zeno::EvolutionModel::gisin_general(lab_frame_hamiltonian(alpha, omega, t), lambda)
        .derivative(t, psi);
  };
  State psi = psi0;
  const std::size_t steps = static_cast<std::size_t>(std::llround(tau / dt));
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) * dt;
    const auto& y = zeno::coords(psi);
    const State k1 = rhs(t, psi);
    auto stage = y;
    for (std::size_t j = 0; j < 2; ++j) stage[j] = y[j] + 0.5 * dt * zeno::coords(k1)[j];
    const State k2 = rhs(t + 0.5 * dt, zeno::with_coords(psi, stage));
    for (std::size_t j = 0; j < 2; ++j) stage[j] = y[j] + 0.5 * dt * zeno::coords(k2)[j];
    const State k3 = rhs(t + 0.5 * dt, zeno::with_coords(psi, stage));
    for (std::size_t j = 0; j < 2; ++j) stage[j] = y[j] + dt * zeno::coords(k3)[j];
    const State k4 = rhs(t + dt, zeno::with_coords(psi, stage));
    for (std::size_t j = 0; j < 2; ++j) {
      stage[j] = y[j] + dt / 6.0 *
                            (zeno::coords(k1)[j] + 2.0 * zeno::coords(k2)[j] +
                             2.0 * zeno::coords(k3)[j] + zeno::coords(k4)[j]);
    }
    psi = zeno::with_coords(psi, stage);
  }
  const double survival_lab = std::norm(zeno::coords(psi)[0]);

  CHECK(survival_lab == doctest::Approx(survival_rotating).epsilon(1e-8));
}

TEST_CASE("soliton state properties") {
  SUBCASE("standing profile peak") {
    const double eta = 1.0;
    const auto p = zeno::SolitonParams::from_eta(eta, 0.0, 1.0, 1.0);
    const zeno::GridSpec grid{-40.0, 40.0, 2048};
    const GridState psi = zeno::soliton_state(p, 0.0, grid);
    double peak = 0.0;
    for (const Complex& c : psi.samples()) peak = std::max(peak, std::abs(c));
    CHECK(peak == doctest::Approx(eta).epsilon(1e-6));  // sqrt(a/b) eta with a=b=1
  }

  SUBCASE("ray speed squared is 4 (eta u)^2 / 3") {
    const auto p = zeno::SolitonParams::from_eta(1.0, 2.0, 1.0, 1.0);
    const zeno::GridSpec grid{-40.0, 40.0, 2048};
    const GridState psi = zeno::soliton_state(p, 0.0, grid);
    const GridState dot = zeno::soliton_time_derivative(p, 0.0, grid);
    const double v = zeno::fs_speed(psi, dot);
    CHECK(v * v == doctest::Approx(16.0 / 3.0).epsilon(1e-6));
  }

  SUBCASE("grid too small") {
    const auto p = zeno::SolitonParams::from_eta(1.0, 0.0, 1.0, 1.0);
    CHECK_THROWS_AS(zeno::soliton_state(p, 0.0, zeno::GridSpec{-8.0, 8.0, 64}), zeno::GridError);
  }

  SUBCASE("parameter validation") {
    CHECK_THROWS_AS(zeno::SolitonParams::from_eta(-1.0, 0.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(zeno::SolitonParams(1.0, 0.0, 1.0, 1.0, 10.0), std::invalid_argument);
    // eta inconsistent with (u, a, omega)
    CHECK_THROWS_AS(zeno::SolitonParams(2.0, 1.0, 1.0, 1.0, 0.0), std::invalid_argument);
  }
}

TEST_CASE("energy uncertainty") {
  const auto h = zeno::HermitianMatrix::diagonal({0.0, 1.0});
  CHECK(zeno::energy_uncertainty(h, FiniteState::basis(2, 0)) == 0.0);

  const double r = 1.0 / std::sqrt(2.0);
  const State plus = FiniteState({Complex{r, 0.0}, Complex{r, 0.0}});
  CHECK(zeno::energy_uncertainty(h, plus) == doctest::Approx(0.5).epsilon(1e-14));

  const double alpha = 0.8;
  const zeno::HermitianMatrix hx(
      2, {Complex{0.0, 0.0}, Complex{0.5 * alpha, 0.0}, Complex{0.5 * alpha, 0.0},
          Complex{0.0, 0.0}});
  CHECK(zeno::energy_uncertainty(hx, FiniteState::basis(2, 0)) ==
        doctest::Approx(0.5 * alpha).epsilon(1e-14));

  // unnormalized input is normalized internally
  const State scaled = FiniteState({Complex{3.0, 0.0}, Complex{3.0, 0.0}});
  CHECK(zeno::energy_uncertainty(h, scaled) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("short_time_k does not depend on omega") {
  const State psi0 = FiniteState::basis(2, 0);
  const double k_ref =
      zeno::short_time_k(zeno::EvolutionModel::gisin_two_level(1.0, 0.5, 0.0), psi0);
  for (double omega : {6.283185307179586, 17.3}) {
    const double k =
        zeno::short_time_k(zeno::EvolutionModel::gisin_two_level(1.0, 0.5, omega), psi0);
    CHECK(k == k_ref);
  }
  CHECK(k_ref == doctest::Approx(0.3125).epsilon(1e-14));
}

TEST_CASE("integrate validates its arguments") {
  const auto model = zeno::EvolutionModel::linear(zeno::HermitianMatrix::diagonal({1.0, 2.0}));
  const State psi0 = FiniteState::basis(2, 0);
  CHECK_THROWS_AS(zeno::evolve_final(model, psi0, 1.0, 0.5, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(zeno::evolve_final(model, psi0, 0.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(zeno::evolve_final(model, psi0, 0.0, 1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(zeno::evolve_final(model, psi0, 0.0, 1.0, 1e-3, zeno::StepMethod::SplitStep),
                  zeno::UnsupportedError);
}

TEST_CASE("unstable step size raises a divergence error naming the step") {
  const zeno::GridSpec grid{-40.0, 40.0, 2048};
  const auto p = zeno::SolitonParams::from_eta(1.0, 1.0, 1.0, 1.0);
  const auto model = zeno::EvolutionModel::nlse({1.0, 1.0, {}, grid});
  const GridState psi0 = zeno::soliton_state(p, 0.0, grid);
  // far beyond the spectral stability limit for this grid
  CHECK_THROWS_AS(zeno::evolve_final(model, psi0, 0.0, 1.0, 1e-2), zeno::DivergenceError);
  try {
    zeno::evolve_final(model, psi0, 0.0, 1.0, 1e-2);
  } catch (const zeno::DivergenceError& e) {
    CHECK(std::string(e.what()).find("step") != std::string::npos);
  }
}
