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

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "zeno/dynamics.hpp"
#include "zeno/measurement.hpp"

// Scenario runner: load a JSON config, execute named experiments, emit
// machine-readable results. Configs are fail-closed: unknown fields are
// errors. Same config (including seed) always produces the same bytes.

namespace zeno {

struct LinearRabiConfig {
  double alpha = 1.0;  // H = (alpha/2) * exchange matrix
};

struct GisinTwoLevelConfig {
  double alpha = 1.0;
  double lambda = 0.0;
  double omega = 6.283185307179586;  // 2 pi unless configured
};

struct NlseSolitonConfig {
  double eta = 1.0;
  double u = 1.0;
  double b = 1.0;
  double mass = 1.0;
  GridSpec grid{-40.0, 40.0, 2048};
};

struct CustomLinearConfig {
  std::size_t dim = 0;
  std::vector<Complex> hamiltonian;  // row-major dim x dim
};

using ModelConfig =
    std::variant<LinearRabiConfig, GisinTwoLevelConfig, NlseSolitonConfig, CustomLinearConfig>;

struct ProtocolConfig {
  double total_time = 1.0;
  std::vector<std::size_t> n_list = {100};  // strictly increasing
  CollapseMode collapse_mode = CollapseMode::Deterministic;
  std::size_t trials = 10000;
  std::uint64_t seed = 1;
};

struct IntegratorConfig {
  std::optional<double> dt;  // absent: max(tau/100, 1e-5), NLSE capped at 2.5e-4
  StepMethod method = StepMethod::Rk4;
};

struct OutputConfig {
  std::string directory;  // empty: ZENO_LAB_OUT or "."
  bool csv = true;
  bool json = true;
};

struct SweepSpec {
  std::string parameter;  // one of: alpha, lambda, eta, u, b
  std::vector<double> values;
};

struct ScenarioConfig {
  ModelConfig model;
  ProtocolConfig protocol;
  IntegratorConfig integrator;
  OutputConfig output;
  std::optional<std::vector<Complex>> initial_state;  // finite-state scenarios only
  std::optional<SweepSpec> sweep;
};

struct SurvivalRow {
  std::size_t n = 0;
  double tau = 0.0;
  double cumulative = 0.0;
  double analytic_product = 0.0;  // (1 - tau^2 v0^2/4)^N
  double asymptotic = 0.0;        // exp(-T^2 v0^2 / 4N)
};

struct StochasticRow {
  std::size_t n = 0;
  std::size_t trials = 0;
  double fraction = 0.0;
  double std_error = 0.0;
};

struct RunReport {
  ScenarioConfig config;
  double k_analytic = 0.0;
  double k_oracle = 0.0;
  double v0 = 0.0;
  double path_length_s = 0.0;
  std::optional<double> delta_e;  // linear scenarios only
  std::vector<SurvivalRow> survival;
  std::vector<StochasticRow> stochastic;  // filled in Stochastic mode
  std::optional<bool> criterion;          // needs >= 2 survival rows
  double wall_time_seconds = 0.0;
};

struct SweepRow {
  double value = 0.0;
  double k = 0.0;
  double v0 = 0.0;
  std::vector<double> cumulative;  // one entry per N in n_list
};

struct SweepTable {
  std::string parameter;
  std::vector<std::size_t> n_list;
  std::vector<SweepRow> rows;  // ordered by value
};

// --- configuration I/O (ConfigError names the offending field) -------------

ScenarioConfig parse_config(const nlohmann::json& j);
ScenarioConfig load_config_file(const std::string& path);
nlohmann::json config_to_json(const ScenarioConfig& config);

std::string scenario_name(const ScenarioConfig& config);

// --- execution --------------------------------------------------------------

EvolutionModel build_model(const ScenarioConfig& config);
State build_initial_state(const ScenarioConfig& config);

/// Integration step used for a Zeno segment of length tau.
double segment_dt(const ScenarioConfig& config, ModelKind kind, double tau);

RunReport run_scenario(const ScenarioConfig& config);
SweepTable run_sweep(const ScenarioConfig& config);

// --- report I/O -------------------------------------------------------------

nlohmann::json report_to_json(const RunReport& report);
RunReport report_from_json(const nlohmann::json& j);

/// CSV with header "N,tau,cumulative,analytic_product,asymptotic"; floats are
/// printed with 17 significant digits so doubles round-trip exactly.
std::string survival_table_csv(const std::vector<SurvivalRow>& rows);
std::vector<SurvivalRow> parse_survival_csv(const std::string& text);

std::string sweep_table_csv(const SweepTable& table);

/// Resolution order: explicit override, config output.directory, ZENO_LAB_OUT,
/// current directory.
std::string resolve_out_dir(const std::optional<std::string>& override_dir,
                            const ScenarioConfig& config);

/// Write-temp-then-rename; the file appears atomically.
void write_file_atomic(const std::string& path, const std::string& content);

/// Emit report.json / survival.csv per the config formats; returns the paths.
std::vector<std::string> write_run_files(const RunReport& report, const std::string& out_dir);

/// Emit sweep.json / sweep.csv per the config formats; returns the paths.
std::vector<std::string> write_sweep_files(const SweepTable& table, const ScenarioConfig& config,
                                           const std::string& out_dir);

}  // namespace zeno
