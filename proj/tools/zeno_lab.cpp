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

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "zeno/scenario.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  std::string format;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "Path to the JSON scenario config")->required();
  cmd->add_option("--out-dir", opts.out_dir, "Output directory (overrides config and ZENO_LAB_OUT)");
  cmd->add_option("--format", opts.format, "Output format: csv, json, or both")
      ->check(CLI::IsMember({"csv", "json", "both"}));
  std::uint64_t* seed_slot = nullptr;
  static_cast<void>(seed_slot);
  cmd->add_option_function<std::uint64_t>(
      "--seed", [&opts](std::uint64_t s) { opts.seed = s; },
      "Override the config seed");
}

zeno::ScenarioConfig load_with_overrides(const CommonOptions& opts) {
  zeno::ScenarioConfig config = zeno::load_config_file(opts.config_path);
  if (opts.seed) config.protocol.seed = *opts.seed;
  if (!opts.format.empty()) {
    config.output.csv = (opts.format == "csv" || opts.format == "both");
    config.output.json = (opts.format == "json" || opts.format == "both");
  }
  return config;
}

void print_run_summary(const zeno::RunReport& report) {
  std::printf("scenario: %s\n", zeno::scenario_name(report.config).c_str());
  std::printf("k_analytic = %.12g   k_oracle = %.12g\n", report.k_analytic, report.k_oracle);
  std::printf("v0 = %.12g   s(T) = %.12g\n", report.v0, report.path_length_s);
  if (report.delta_e) std::printf("delta_E = %.12g\n", *report.delta_e);
  std::printf("%8s %14s %18s %18s %18s\n", "N", "tau", "cumulative", "analytic_product",
              "asymptotic");
  for (const zeno::SurvivalRow& row : report.survival) {
    std::printf("%8zu %14.6g %18.12g %18.12g %18.12g\n", row.n, row.tau, row.cumulative,
                row.analytic_product, row.asymptotic);
  }
  for (const zeno::StochasticRow& row : report.stochastic) {
    std::printf("stochastic N=%zu: fraction = %.8g (trials = %zu, std_err = %.3g)\n", row.n,
                row.fraction, row.trials, row.std_error);
  }
  if (report.criterion) {
    std::printf("zeno criterion (survival strictly increasing in N): %s\n",
                *report.criterion ? "true" : "false");
  }
  std::printf("wall time: %.3f s\n", report.wall_time_seconds);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zeno-lab: survival probabilities under repeated projective measurement"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  CLI::App* run_cmd = app.add_subcommand("run", "Run one scenario and emit a report");
  add_common(run_cmd, run_opts);

  CommonOptions sweep_opts;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Sweep one parameter over a grid");
  add_common(sweep_cmd, sweep_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      const zeno::ScenarioConfig config = load_with_overrides(run_opts);
      const zeno::RunReport report = zeno::run_scenario(config);
      const std::string out_dir = zeno::resolve_out_dir(
          run_opts.out_dir.empty() ? std::nullopt : std::optional(run_opts.out_dir), config);
      const auto paths = zeno::write_run_files(report, out_dir);
      print_run_summary(report);
      for (const std::string& p : paths) std::printf("wrote %s\n", p.c_str());
    } else {
      const zeno::ScenarioConfig config = load_with_overrides(sweep_opts);
      const zeno::SweepTable table = zeno::run_sweep(config);
      const std::string out_dir = zeno::resolve_out_dir(
          sweep_opts.out_dir.empty() ? std::nullopt : std::optional(sweep_opts.out_dir), config);
      const auto paths = zeno::write_sweep_files(table, config, out_dir);
      std::printf("sweep over %s: %zu points\n", table.parameter.c_str(), table.rows.size());
      for (const zeno::SweepRow& row : table.rows) {
        std::printf("  %s = %-12.6g k = %-14.8g v0 = %-14.8g\n", table.parameter.c_str(),
                    row.value, row.k, row.v0);
      }
      for (const std::string& p : paths) std::printf("wrote %s\n", p.c_str());
    }
  } catch (const zeno::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const zeno::DivergenceError& e) {
    std::cerr << "numerical divergence: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
