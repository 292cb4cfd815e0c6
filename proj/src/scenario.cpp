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

#include "zeno/scenario.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string_view>

#include "zeno/geometry.hpp"
#include "zeno/oracle.hpp"

namespace zeno {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// --- fail-closed JSON access -------------------------------------------------

void check_keys(const json& obj, const std::string& context,
                std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ConfigError(context + ": expected an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (std::string_view k : allowed) {
      if (item.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) throw ConfigError(context + ": unknown field '" + item.key() + "'");
  }
}

double get_number(const json& obj, const std::string& context, const std::string& key) {
  if (!obj.contains(key)) throw ConfigError(context + "." + key + ": missing");
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(context + "." + key + ": expected a number");
  return v.get<double>();
}

double get_number_or(const json& obj, const std::string& context, const std::string& key,
                     double fallback) {
  if (!obj.contains(key)) return fallback;
  return get_number(obj, context, key);
}

std::uint64_t get_unsigned(const json& obj, const std::string& context, const std::string& key,
                           std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_unsigned()) {
    throw ConfigError(context + "." + key + ": expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::string get_string(const json& obj, const std::string& context, const std::string& key) {
  if (!obj.contains(key)) throw ConfigError(context + "." + key + ": missing");
  const json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(context + "." + key + ": expected a string");
  return v.get<std::string>();
}

Complex parse_complex(const json& v, const std::string& context) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ConfigError(context + ": expected a [re, im] pair");
  }
  return Complex{v[0].get<double>(), v[1].get<double>()};
}

json complex_to_json(Complex c) { return json::array({c.real(), c.imag()}); }

std::vector<std::size_t> parse_n_field(const json& v, const std::string& context) {
  std::vector<std::size_t> ns;
  if (v.is_number_unsigned()) {
    ns.push_back(v.get<std::size_t>());
  } else if (v.is_array()) {
    for (const json& e : v) {
      if (!e.is_number_unsigned()) throw ConfigError(context + ": N entries must be integers >= 1");
      ns.push_back(e.get<std::size_t>());
    }
  } else {
    throw ConfigError(context + ": expected an integer or an array of integers");
  }
  if (ns.empty()) throw ConfigError(context + ": N list is empty");
  for (std::size_t n : ns) {
    if (n < 1) throw ConfigError(context + ": N must be >= 1");
  }
  for (std::size_t i = 1; i < ns.size(); ++i) {
    if (ns[i] <= ns[i - 1]) throw ConfigError(context + ": N list must be strictly increasing");
  }
  return ns;
}

ModelKind config_kind(const ScenarioConfig& config) {
  switch (config.model.index()) {
    case 0: return ModelKind::Linear;
    case 1: return ModelKind::GisinTwoLevel;
    case 2: return ModelKind::Nlse1d;
    default: return ModelKind::Linear;  // custom_linear
  }
}

bool is_finite_kind(const ScenarioConfig& config) {
  return !std::holds_alternative<NlseSolitonConfig>(config.model);
}

void validate_sweep(const ScenarioConfig& config) {
  const SweepSpec& s = *config.sweep;
  static const std::set<std::string> all{"alpha", "lambda", "eta", "u", "b"};
  if (all.find(s.parameter) == all.end()) {
    throw ConfigError("sweep.parameter: must be one of alpha, lambda, eta, u, b");
  }
  if (s.values.empty()) throw ConfigError("sweep.values: empty grid");
  if (s.values.size() > 10000) throw ConfigError("sweep.values: more than 10^4 points");
  std::set<double> uniq(s.values.begin(), s.values.end());
  if (uniq.size() != s.values.size()) throw ConfigError("sweep.values: duplicate values");
  for (double v : s.values) {
    if (!std::isfinite(v)) throw ConfigError("sweep.values: non-finite value");
  }

  const bool ok = std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LinearRabiConfig>) {
          return s.parameter == "alpha";
        } else if constexpr (std::is_same_v<T, GisinTwoLevelConfig>) {
          return s.parameter == "alpha" || s.parameter == "lambda";
        } else if constexpr (std::is_same_v<T, NlseSolitonConfig>) {
          return s.parameter == "eta" || s.parameter == "u" || s.parameter == "b";
        } else {
          return false;
        }
      },
      config.model);
  if (!ok) {
    throw ConfigError("sweep.parameter: '" + s.parameter + "' does not apply to scenario '" +
                      scenario_name(config) + "'");
  }
}

}  // namespace

// --- configuration parsing ---------------------------------------------------

std::string scenario_name(const ScenarioConfig& config) {
  switch (config.model.index()) {
    case 0: return "linear_rabi";
    case 1: return "gisin_two_level";
    case 2: return "nlse_soliton";
    default: return "custom_linear";
  }
}

ScenarioConfig parse_config(const json& j) {
  check_keys(j, "config",
             {"scenario", "model", "protocol", "integrator", "output", "initial_state", "sweep"});

  ScenarioConfig config;
  const std::string scenario = get_string(j, "config", "scenario");
  const json model = j.contains("model") ? j.at("model") : json::object();

  if (scenario == "linear_rabi") {
    check_keys(model, "model", {"alpha"});
    LinearRabiConfig m;
    m.alpha = get_number_or(model, "model", "alpha", m.alpha);
    if (!(m.alpha >= 0.0)) throw ConfigError("model.alpha: must be >= 0");
    config.model = m;
  } else if (scenario == "gisin_two_level") {
    check_keys(model, "model", {"alpha", "lambda", "omega"});
    GisinTwoLevelConfig m;
    m.alpha = get_number_or(model, "model", "alpha", m.alpha);
    m.lambda = get_number_or(model, "model", "lambda", m.lambda);
    m.omega = get_number_or(model, "model", "omega", m.omega);
    if (!(m.alpha >= 0.0)) throw ConfigError("model.alpha: must be >= 0");
    if (!(m.lambda >= 0.0)) throw ConfigError("model.lambda: must be >= 0");
    config.model = m;
  } else if (scenario == "nlse_soliton") {
    check_keys(model, "model", {"eta", "u", "b", "mass", "grid"});
    NlseSolitonConfig m;
    m.eta = get_number_or(model, "model", "eta", m.eta);
    m.u = get_number_or(model, "model", "u", m.u);
    m.b = get_number_or(model, "model", "b", m.b);
    m.mass = get_number_or(model, "model", "mass", m.mass);
    if (!(m.eta > 0.0)) throw ConfigError("model.eta: must be > 0");
    if (!(m.b > 0.0)) throw ConfigError("model.b: must be > 0 (soliton initial data)");
    if (!(m.mass > 0.0)) throw ConfigError("model.mass: must be > 0");
    if (model.contains("grid")) {
      const json& g = model.at("grid");
      check_keys(g, "model.grid", {"x_min", "x_max", "n_points"});
      m.grid.x_min = get_number_or(g, "model.grid", "x_min", m.grid.x_min);
      m.grid.x_max = get_number_or(g, "model.grid", "x_max", m.grid.x_max);
      m.grid.n_points = static_cast<std::size_t>(
          get_unsigned(g, "model.grid", "n_points", m.grid.n_points));
      if (!(m.grid.x_max > m.grid.x_min)) throw ConfigError("model.grid: x_max must exceed x_min");
      const std::size_t n = m.grid.n_points;
      if (n < 8 || (n & (n - 1)) != 0) {
        throw ConfigError("model.grid.n_points: must be a power of two >= 8");
      }
    }
    config.model = m;
  } else if (scenario == "custom_linear") {
    check_keys(model, "model", {"hamiltonian"});
    if (!model.contains("hamiltonian")) throw ConfigError("model.hamiltonian: missing");
    const json& h = model.at("hamiltonian");
    if (!h.is_array() || h.empty()) throw ConfigError("model.hamiltonian: expected rows");
    CustomLinearConfig m;
    m.dim = h.size();
    m.hamiltonian.reserve(m.dim * m.dim);
    for (const json& row : h) {
      if (!row.is_array() || row.size() != m.dim) {
        throw ConfigError("model.hamiltonian: must be a square matrix");
      }
      for (const json& entry : row) {
        m.hamiltonian.push_back(parse_complex(entry, "model.hamiltonian"));
      }
    }
    try {
      HermitianMatrix probe(m.dim, m.hamiltonian);
    } catch (const Error& e) {
      throw ConfigError(std::string("model.hamiltonian: ") + e.what());
    }
    config.model = m;
  } else {
    throw ConfigError("scenario: unknown scenario '" + scenario + "'");
  }

  if (j.contains("protocol")) {
    const json& p = j.at("protocol");
    check_keys(p, "protocol", {"T", "N", "collapse_mode", "trials", "seed"});
    config.protocol.total_time = get_number_or(p, "protocol", "T", config.protocol.total_time);
    if (!(config.protocol.total_time > 0.0)) throw ConfigError("protocol.T: must be > 0");
    if (p.contains("N")) config.protocol.n_list = parse_n_field(p.at("N"), "protocol.N");
    if (p.contains("collapse_mode")) {
      const std::string mode = get_string(p, "protocol", "collapse_mode");
      if (mode == "deterministic") {
        config.protocol.collapse_mode = CollapseMode::Deterministic;
      } else if (mode == "stochastic") {
        config.protocol.collapse_mode = CollapseMode::Stochastic;
      } else {
        throw ConfigError("protocol.collapse_mode: expected 'deterministic' or 'stochastic'");
      }
    }
    config.protocol.trials =
        static_cast<std::size_t>(get_unsigned(p, "protocol", "trials", config.protocol.trials));
    if (config.protocol.collapse_mode == CollapseMode::Stochastic && config.protocol.trials < 1) {
      throw ConfigError("protocol.trials: must be >= 1 in stochastic mode");
    }
    config.protocol.seed = get_unsigned(p, "protocol", "seed", config.protocol.seed);
  }

  if (j.contains("integrator")) {
    const json& i = j.at("integrator");
    check_keys(i, "integrator", {"dt", "method"});
    if (i.contains("dt")) {
      const double dt = get_number(i, "integrator", "dt");
      if (!(dt > 0.0)) throw ConfigError("integrator.dt: must be > 0");
      config.integrator.dt = dt;
    }
    if (i.contains("method")) {
      const std::string method = get_string(i, "integrator", "method");
      if (method == "rk4") {
        config.integrator.method = StepMethod::Rk4;
      } else if (method == "splitstep") {
        config.integrator.method = StepMethod::SplitStep;
      } else {
        throw ConfigError("integrator.method: expected 'rk4' or 'splitstep'");
      }
    }
  }
  if (config.integrator.method == StepMethod::SplitStep &&
      !std::holds_alternative<NlseSolitonConfig>(config.model)) {
    throw ConfigError("integrator.method: splitstep applies to nlse_soliton only");
  }

  if (j.contains("output")) {
    const json& o = j.at("output");
    check_keys(o, "output", {"directory", "formats"});
    if (o.contains("directory")) config.output.directory = get_string(o, "output", "directory");
    if (o.contains("formats")) {
      const json& f = o.at("formats");
      if (!f.is_array() || f.empty()) throw ConfigError("output.formats: expected a non-empty array");
      config.output.csv = false;
      config.output.json = false;
      for (const json& e : f) {
        if (!e.is_string()) throw ConfigError("output.formats: entries must be strings");
        const std::string name = e.get<std::string>();
        if (name == "csv") {
          config.output.csv = true;
        } else if (name == "json") {
          config.output.json = true;
        } else {
          throw ConfigError("output.formats: unknown format '" + name + "'");
        }
      }
    }
  }

  if (j.contains("initial_state")) {
    if (!is_finite_kind(config)) {
      throw ConfigError("initial_state: not configurable for nlse_soliton");
    }
    const json& s = j.at("initial_state");
    if (!s.is_array() || s.empty()) throw ConfigError("initial_state: expected [re, im] pairs");
    std::vector<Complex> amps;
    amps.reserve(s.size());
    for (const json& e : s) amps.push_back(parse_complex(e, "initial_state"));
    config.initial_state = std::move(amps);
  }
  if (const auto* custom = std::get_if<CustomLinearConfig>(&config.model)) {
    if (!config.initial_state) throw ConfigError("initial_state: required for custom_linear");
    if (config.initial_state->size() != custom->dim) {
      throw ConfigError("initial_state: dimension does not match the Hamiltonian");
    }
  } else if (config.initial_state && is_finite_kind(config) && config.initial_state->size() != 2) {
    throw ConfigError("initial_state: two-level scenarios need dimension 2");
  }

  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    check_keys(s, "sweep", {"parameter", "values"});
    SweepSpec spec;
    spec.parameter = get_string(s, "sweep", "parameter");
    if (!s.contains("values") || !s.at("values").is_array()) {
      throw ConfigError("sweep.values: expected an array");
    }
    for (const json& v : s.at("values")) {
      if (!v.is_number()) throw ConfigError("sweep.values: entries must be numbers");
      spec.values.push_back(v.get<double>());
    }
    config.sweep = std::move(spec);
    validate_sweep(config);
  }

  return config;
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

json config_to_json(const ScenarioConfig& config) {
  json j;
  j["scenario"] = scenario_name(config);

  json model;
  std::visit(
      [&model](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LinearRabiConfig>) {
          model["alpha"] = m.alpha;
        } else if constexpr (std::is_same_v<T, GisinTwoLevelConfig>) {
          model["alpha"] = m.alpha;
          model["lambda"] = m.lambda;
          model["omega"] = m.omega;
        } else if constexpr (std::is_same_v<T, NlseSolitonConfig>) {
          model["eta"] = m.eta;
          model["u"] = m.u;
          model["b"] = m.b;
          model["mass"] = m.mass;
          model["grid"] = {{"x_min", m.grid.x_min},
                           {"x_max", m.grid.x_max},
                           {"n_points", m.grid.n_points}};
        } else {
          json rows = json::array();
          for (std::size_t i = 0; i < m.dim; ++i) {
            json row = json::array();
            for (std::size_t k = 0; k < m.dim; ++k) {
              row.push_back(complex_to_json(m.hamiltonian[i * m.dim + k]));
            }
            rows.push_back(std::move(row));
          }
          model["hamiltonian"] = std::move(rows);
        }
      },
      config.model);
  j["model"] = std::move(model);

  j["protocol"] = {
      {"T", config.protocol.total_time},
      {"N", config.protocol.n_list},
      {"collapse_mode",
       config.protocol.collapse_mode == CollapseMode::Stochastic ? "stochastic" : "deterministic"},
      {"trials", config.protocol.trials},
      {"seed", config.protocol.seed}};

  json integrator;
  if (config.integrator.dt) integrator["dt"] = *config.integrator.dt;
  integrator["method"] = config.integrator.method == StepMethod::SplitStep ? "splitstep" : "rk4";
  j["integrator"] = std::move(integrator);

  json formats = json::array();
  if (config.output.csv) formats.push_back("csv");
  if (config.output.json) formats.push_back("json");
  j["output"] = {{"directory", config.output.directory}, {"formats", std::move(formats)}};

  if (config.initial_state) {
    json s = json::array();
    for (Complex c : *config.initial_state) s.push_back(complex_to_json(c));
    j["initial_state"] = std::move(s);
  }
  if (config.sweep) {
    j["sweep"] = {{"parameter", config.sweep->parameter}, {"values", config.sweep->values}};
  }
  return j;
}

// --- model construction ------------------------------------------------------

EvolutionModel build_model(const ScenarioConfig& config) {
  return std::visit(
      [](const auto& m) -> EvolutionModel {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LinearRabiConfig>) {
          const double h = 0.5 * m.alpha;
          HermitianMatrix hamiltonian(
              2, {Complex{0, 0}, Complex{h, 0}, Complex{h, 0}, Complex{0, 0}});
          return EvolutionModel::linear(std::move(hamiltonian));
        } else if constexpr (std::is_same_v<T, GisinTwoLevelConfig>) {
          return EvolutionModel::gisin_two_level(m.alpha, m.lambda, m.omega);
        } else if constexpr (std::is_same_v<T, NlseSolitonConfig>) {
          return EvolutionModel::nlse(NlseParams{m.mass, m.b, {}, m.grid});
        } else {
          return EvolutionModel::linear(HermitianMatrix(m.dim, m.hamiltonian));
        }
      },
      config.model);
}

State build_initial_state(const ScenarioConfig& config) {
  if (const auto* nlse = std::get_if<NlseSolitonConfig>(&config.model)) {
    const SolitonParams p =
        SolitonParams::from_eta(nlse->eta, nlse->u, 1.0 / nlse->mass, nlse->b);
    return soliton_state(p, 0.0, nlse->grid);
  }
  if (config.initial_state) return FiniteState(*config.initial_state);
  return FiniteState::basis(2, 0);
}

double segment_dt(const ScenarioConfig& config, ModelKind kind, double tau) {
  double dt;
  if (config.integrator.dt) {
    dt = *config.integrator.dt;
    if (dt > tau / 10.0 * (1.0 + 1e-12)) {
      throw ConfigError("integrator.dt: must be <= tau/10 for every N in the protocol");
    }
    return dt;
  }
  dt = std::max(tau / 100.0, 1e-5);
  if (kind == ModelKind::Nlse1d) dt = std::min(dt, 2.5e-4);  // spectral RK4 stability
  return std::min(dt, tau / 10.0);
}

// --- execution ---------------------------------------------------------------

namespace {

double oracle_k(const EvolutionModel& model, const State& psi0) {
  double tau = 1e-2;
  for (int attempt = 0; attempt < 40; ++attempt) {
    const State final = evolve_final(model, psi0, 0.0, tau, tau / 100.0, StepMethod::Rk4);
    if (survival_probability(psi0, final) > 0.9) break;
    tau *= 0.5;
  }
  return fd_k_estimate(model, psi0, tau, tau / 100.0).value;
}

double full_trajectory_length(const EvolutionModel& model, const State& psi0, double total_time) {
  double dt = total_time / 2000.0;
  if (model.kind() == ModelKind::Nlse1d) dt = std::min(dt, 2.5e-4);
  const std::size_t total_steps =
      static_cast<std::size_t>(std::ceil(total_time / dt - 1e-12));
  const std::size_t stride = std::max<std::size_t>(1, total_steps / 1000);

  std::vector<TimedState> samples;
  samples.reserve(total_steps / stride + 2);
  std::size_t index = 0;
  State psi = psi0;
  integrate(model, psi, 0.0, total_time, dt, StepMethod::Rk4,
            [&](double t, const State& s) {
              if (index % stride == 0) samples.push_back(TimedState{t, s});
              ++index;
            });
  if (samples.back().t < total_time) samples.push_back(TimedState{total_time, psi});
  return path_length(samples, model).total_length;
}

}  // namespace

RunReport run_scenario(const ScenarioConfig& config) {
  const auto start = std::chrono::steady_clock::now();

  const EvolutionModel model = build_model(config);
  const State psi0 = build_initial_state(config);
  const ModelKind kind = model.kind();

  RunReport report;
  report.config = config;
  report.v0 = fs_speed(psi0, model.derivative(0.0, psi0));
  report.k_analytic = report.v0 * report.v0 / 4.0;
  report.k_oracle = oracle_k(model, psi0);
  if (kind == ModelKind::Linear) {
    report.delta_e = energy_uncertainty(model.linear_params().hamiltonian, psi0);
  }
  report.path_length_s = full_trajectory_length(model, psi0, config.protocol.total_time);

  const double total_time = config.protocol.total_time;
  for (std::size_t n : config.protocol.n_list) {
    const double tau = total_time / static_cast<double>(n);
    const double dt = segment_dt(config, kind, tau);
    const ZenoProtocol protocol(total_time, n, psi0, config.protocol.collapse_mode);
    const ZenoResult r = zeno_run(model, protocol, dt, config.integrator.method);

    SurvivalRow row;
    row.n = n;
    row.tau = tau;
    row.cumulative = r.cumulative_survival;
    row.analytic_product =
        std::pow(1.0 - tau * tau * report.v0 * report.v0 / 4.0, static_cast<double>(n));
    row.asymptotic = r.asymptotic_estimate;
    report.survival.push_back(row);

    if (config.protocol.collapse_mode == CollapseMode::Stochastic) {
      const double fraction = stochastic_zeno(model, protocol, config.protocol.trials,
                                              config.protocol.seed, dt, config.integrator.method);
      StochasticRow srow;
      srow.n = n;
      srow.trials = config.protocol.trials;
      srow.fraction = fraction;
      srow.std_error =
          std::sqrt(std::max(0.0, fraction * (1.0 - fraction)) /
                    static_cast<double>(config.protocol.trials));
      report.stochastic.push_back(srow);
    }
  }

  if (report.survival.size() >= 2) {
    std::vector<std::pair<std::size_t, double>> points;
    points.reserve(report.survival.size());
    for (const SurvivalRow& row : report.survival) points.emplace_back(row.n, row.cumulative);
    report.criterion = zeno_criterion(points);
  }

  const auto end = std::chrono::steady_clock::now();
  report.wall_time_seconds = std::chrono::duration<double>(end - start).count();
  return report;
}

namespace {

ScenarioConfig apply_sweep_value(ScenarioConfig config, const std::string& parameter,
                                 double value) {
  std::visit(
      [&](auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LinearRabiConfig>) {
          m.alpha = value;
        } else if constexpr (std::is_same_v<T, GisinTwoLevelConfig>) {
          if (parameter == "alpha") {
            m.alpha = value;
          } else {
            m.lambda = value;
          }
        } else if constexpr (std::is_same_v<T, NlseSolitonConfig>) {
          if (parameter == "eta") {
            m.eta = value;
          } else if (parameter == "u") {
            m.u = value;
          } else {
            m.b = value;
          }
        }
      },
      config.model);
  return config;
}

}  // namespace

SweepTable run_sweep(const ScenarioConfig& config) {
  if (!config.sweep) throw ConfigError("sweep: config has no sweep section");
  validate_sweep(config);

  std::vector<double> values = config.sweep->values;
  std::sort(values.begin(), values.end());

  SweepTable table;
  table.parameter = config.sweep->parameter;
  table.n_list = config.protocol.n_list;
  table.rows.resize(values.size());

  std::exception_ptr first_error = nullptr;
  const std::int64_t n_points = static_cast<std::int64_t>(values.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n_points; ++i) {
    try {
      const double value = values[static_cast<std::size_t>(i)];
      const ScenarioConfig point = apply_sweep_value(config, table.parameter, value);
      const EvolutionModel model = build_model(point);
      const State psi0 = build_initial_state(point);

      SweepRow row;
      row.value = value;
      row.v0 = fs_speed(psi0, model.derivative(0.0, psi0));
      row.k = row.v0 * row.v0 / 4.0;
      for (std::size_t n : point.protocol.n_list) {
        const double tau = point.protocol.total_time / static_cast<double>(n);
        const double dt = segment_dt(point, model.kind(), tau);
        const ZenoProtocol protocol(point.protocol.total_time, n, psi0,
                                    point.protocol.collapse_mode);
        row.cumulative.push_back(
            zeno_run(model, protocol, dt, point.integrator.method).cumulative_survival);
      }
      table.rows[static_cast<std::size_t>(i)] = std::move(row);
    } catch (...) {
#pragma omp critical
      {
        if (!first_error) first_error = std::current_exception();
      }
    }
  }
  if (first_error) std::rethrow_exception(first_error);
  return table;
}

// --- report serialization ----------------------------------------------------

json report_to_json(const RunReport& report) {
  json j;
  j["config"] = config_to_json(report.config);
  j["k_analytic"] = report.k_analytic;
  j["k_oracle"] = report.k_oracle;
  j["v0"] = report.v0;
  j["s"] = report.path_length_s;
  j["delta_e"] = report.delta_e ? json(*report.delta_e) : json(nullptr);

  json rows = json::array();
  for (const SurvivalRow& row : report.survival) {
    rows.push_back({{"N", row.n},
                    {"tau", row.tau},
                    {"cumulative", row.cumulative},
                    {"analytic_product", row.analytic_product},
                    {"asymptotic", row.asymptotic}});
  }
  j["survival"] = std::move(rows);

  json srows = json::array();
  for (const StochasticRow& row : report.stochastic) {
    srows.push_back({{"N", row.n},
                     {"trials", row.trials},
                     {"fraction", row.fraction},
                     {"std_error", row.std_error}});
  }
  j["stochastic"] = std::move(srows);

  j["criterion"] = report.criterion ? json(*report.criterion) : json(nullptr);
  j["wall_time_seconds"] = report.wall_time_seconds;
  return j;
}

RunReport report_from_json(const json& j) {
  check_keys(j, "report",
             {"config", "k_analytic", "k_oracle", "v0", "s", "delta_e", "survival", "stochastic",
              "criterion", "wall_time_seconds"});
  RunReport report;
  report.config = parse_config(j.at("config"));
  report.k_analytic = j.at("k_analytic").get<double>();
  report.k_oracle = j.at("k_oracle").get<double>();
  report.v0 = j.at("v0").get<double>();
  report.path_length_s = j.at("s").get<double>();
  if (!j.at("delta_e").is_null()) report.delta_e = j.at("delta_e").get<double>();
  for (const json& row : j.at("survival")) {
    SurvivalRow r;
    r.n = row.at("N").get<std::size_t>();
    r.tau = row.at("tau").get<double>();
    r.cumulative = row.at("cumulative").get<double>();
    r.analytic_product = row.at("analytic_product").get<double>();
    r.asymptotic = row.at("asymptotic").get<double>();
    report.survival.push_back(r);
  }
  for (const json& row : j.at("stochastic")) {
    StochasticRow r;
    r.n = row.at("N").get<std::size_t>();
    r.trials = row.at("trials").get<std::size_t>();
    r.fraction = row.at("fraction").get<double>();
    r.std_error = row.at("std_error").get<double>();
    report.stochastic.push_back(r);
  }
  if (!j.at("criterion").is_null()) report.criterion = j.at("criterion").get<bool>();
  report.wall_time_seconds = j.at("wall_time_seconds").get<double>();
  return report;
}

std::string survival_table_csv(const std::vector<SurvivalRow>& rows) {
  std::ostringstream os;
  os << "N,tau,cumulative,analytic_product,asymptotic\n";
  for (const SurvivalRow& row : rows) {
    os << row.n << ',' << fmt17(row.tau) << ',' << fmt17(row.cumulative) << ','
       << fmt17(row.analytic_product) << ',' << fmt17(row.asymptotic) << '\n';
  }
  return os.str();
}

std::vector<SurvivalRow> parse_survival_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "N,tau,cumulative,analytic_product,asymptotic") {
    throw ConfigError("survival csv: unexpected header");
  }
  std::vector<SurvivalRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (std::count(line.begin(), line.end(), ',') != 4) {
      throw ConfigError("survival csv: malformed row '" + line + "'");
    }
    std::array<std::string, 5> fields;
    std::size_t start = 0;
    for (std::size_t f = 0; f < 5; ++f) {
      const std::size_t comma = line.find(',', start);
      fields[f] =
          line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      start = (comma == std::string::npos) ? line.size() : comma + 1;
    }
    SurvivalRow row;
    row.n = std::stoull(fields[0]);
    row.tau = std::stod(fields[1]);
    row.cumulative = std::stod(fields[2]);
    row.analytic_product = std::stod(fields[3]);
    row.asymptotic = std::stod(fields[4]);
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_table_csv(const SweepTable& table) {
  std::ostringstream os;
  os << table.parameter << ",k,v0";
  for (std::size_t n : table.n_list) os << ",cumulative_N" << n;
  os << '\n';
  for (const SweepRow& row : table.rows) {
    os << fmt17(row.value) << ',' << fmt17(row.k) << ',' << fmt17(row.v0);
    for (double c : row.cumulative) os << ',' << fmt17(c);
    os << '\n';
  }
  return os.str();
}

// --- file output -------------------------------------------------------------

std::string resolve_out_dir(const std::optional<std::string>& override_dir,
                            const ScenarioConfig& config) {
  if (override_dir && !override_dir->empty()) return *override_dir;
  if (!config.output.directory.empty()) return config.output.directory;
  if (const char* env = std::getenv("ZENO_LAB_OUT"); env != nullptr && env[0] != '\0') {
    return env;
  }
  return ".";
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open output file: " + tmp.string());
    out << content;
    if (!out) throw Error("failed writing output file: " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::vector<std::string> write_run_files(const RunReport& report, const std::string& out_dir) {
  std::vector<std::string> paths;
  fs::create_directories(out_dir);
  if (report.config.output.json) {
    const fs::path p = fs::path(out_dir) / "report.json";
    write_file_atomic(p.string(), report_to_json(report).dump(2) + "\n");
    paths.push_back(p.string());
  }
  if (report.config.output.csv) {
    const fs::path p = fs::path(out_dir) / "survival.csv";
    write_file_atomic(p.string(), survival_table_csv(report.survival));
    paths.push_back(p.string());
  }
  return paths;
}

std::vector<std::string> write_sweep_files(const SweepTable& table, const ScenarioConfig& config,
                                           const std::string& out_dir) {
  std::vector<std::string> paths;
  fs::create_directories(out_dir);
  if (config.output.json) {
    json j;
    j["config"] = config_to_json(config);
    j["parameter"] = table.parameter;
    j["N"] = table.n_list;
    json rows = json::array();
    for (const SweepRow& row : table.rows) {
      rows.push_back({{"value", row.value},
                      {"k", row.k},
                      {"v0", row.v0},
                      {"cumulative", row.cumulative}});
    }
    j["rows"] = std::move(rows);
    const fs::path p = fs::path(out_dir) / "sweep.json";
    write_file_atomic(p.string(), j.dump(2) + "\n");
    paths.push_back(p.string());
  }
  if (config.output.csv) {
    const fs::path p = fs::path(out_dir) / "sweep.csv";
    write_file_atomic(p.string(), sweep_table_csv(table));
    paths.push_back(p.string());
  }
  return paths;
}

}  // namespace zeno
