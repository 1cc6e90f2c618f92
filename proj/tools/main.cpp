// Copyright 2026 the aqmsim authors
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

// Command-line front end: run scenario presets, tune RBF-family controllers,
// execute sweeps and side-by-side comparisons, and export everything as CSV
// for external plotting.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "aqmsim/aqmsim.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSimulation = 3;
constexpr int kExitIo = 4;

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  bool dump_effective = false;
};

aqmsim::RunConfig load_config(const CommonArgs& args) {
  aqmsim::RunConfig cfg;
  if (!args.config_path.empty()) cfg = aqmsim::parse_config_file(args.config_path);
  if (args.seed) cfg.seed = *args.seed;
  if (args.dt) {
    if (!(*args.dt > 0.0)) throw aqmsim::ConfigError("--dt must be > 0");
    cfg.dt = *args.dt;
  }
  return cfg;
}

std::string prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw aqmsim::IoError("cannot create output directory '" + dir + "'");
  return dir;
}

aqmsim::NamedController effective_controller(const aqmsim::RunConfig& cfg) {
  if (cfg.controller) return *cfg.controller;
  return {"rbf", aqmsim::controller_preset("rbf")};
}

std::vector<aqmsim::NamedController> effective_controllers(const aqmsim::RunConfig& cfg) {
  if (!cfg.controllers.empty()) return cfg.controllers;
  std::vector<aqmsim::NamedController> all;
  for (const auto& name : aqmsim::controller_preset_names())
    all.push_back({name, aqmsim::controller_preset(name)});
  return all;
}

int dump_config(const aqmsim::RunConfig& cfg) {
  std::cout << aqmsim::effective_config(cfg).dump(2) << '\n';
  return 0;
}

int cmd_run(const CommonArgs& args) {
  auto cfg = load_config(args);
  if (args.dump_effective) return dump_config(cfg);
  const auto controller = effective_controller(cfg);

  const auto result = aqmsim::simulate(cfg.scenario.network(), controller.config,
                                       cfg.scenario.options(cfg.dt, cfg.trace_period));
  const auto dir = prepare_out_dir(args.out_dir);
  aqmsim::write_trace_csv(dir + "/trace.csv", result.trace);
  aqmsim::write_metrics_csv(dir + "/metrics.csv", result);
  std::cout << "run " << cfg.scenario.name << " + " << controller.name
            << ": iae=" << aqmsim::format_number(result.iae)
            << " utilization=" << aqmsim::format_number(result.utilization)
            << " loss_rate=" << aqmsim::format_number(result.loss_rate) << '\n';
  return 0;
}

int cmd_tune(const CommonArgs& args) {
  auto cfg = load_config(args);
  if (args.dump_effective) return dump_config(cfg);
  const auto controller = effective_controller(cfg);
  if (!aqmsim::is_tunable(controller.config))
    throw aqmsim::ConfigError("tune: scheme '" +
                              aqmsim::scheme_name(controller.config) +
                              "' is not tunable (use rbf or irbf)");

  const auto params = cfg.scenario.network();
  aqmsim::IaeObjectiveSpec spec;
  spec.duration = cfg.scenario.duration;
  spec.dt = cfg.dt;
  spec.trace_period = cfg.trace_period;
  if (cfg.tune.randomized_initial_queues) {
    aqmsim::SplitMix64 rng(aqmsim::derive_seed(cfg.seed, 0x71e5, 0));
    for (int i = 0; i < 11; ++i)
      spec.initial_queues.push_back(rng.uniform() * params.buffer_limit);
  } else {
    spec.initial_queues = cfg.tune.initial_queues;
  }

  auto swarm = cfg.tune.swarm;
  swarm.seed = cfg.seed;
  swarm.threads = static_cast<int>(
      std::min<unsigned>(std::thread::hardware_concurrency(), 8u));

  const auto objective =
      aqmsim::make_iae_objective(controller.config, params, spec, cfg.tune.layout);
  const auto bounds = aqmsim::tune_bounds(controller.config, params, cfg.tune);
  const auto report = aqmsim::minimize(objective, bounds, swarm);

  const auto dir = prepare_out_dir(args.out_dir);
  aqmsim::write_convergence_csv(dir + "/convergence.csv", report);
  aqmsim::write_best_csv(dir + "/best.csv",
                         aqmsim::parameter_names(controller.config, cfg.tune.layout),
                         report.best_position);
  std::cout << "tune " << controller.name << ": best_iae="
            << aqmsim::format_number(report.best_score) << " after "
            << report.iterations_used << " iterations\n";
  return 0;
}

int cmd_sweep(const CommonArgs& args) {
  auto cfg = load_config(args);
  if (args.dump_effective) return dump_config(cfg);
  const auto controllers = effective_controllers(cfg);

  aqmsim::SweepSpec sweep;
  sweep.axis = cfg.sweep_axis;
  sweep.values = cfg.sweep_values.empty() ? aqmsim::default_sweep_values(cfg.sweep_axis)
                                          : cfg.sweep_values;
  sweep.base = cfg.scenario;
  sweep.validate();

  std::vector<aqmsim::SweepRow> rows;
  bool any_ok = false;
  for (double value : sweep.values) {
    const auto scenario = sweep.scenario_for(value);
    const std::vector<aqmsim::ScenarioSpec> one{scenario};
    const auto cells =
        aqmsim::run_matrix(one, controllers, cfg.dt, cfg.trace_period);
    for (const auto& cell : cells) {
      aqmsim::SweepRow row;
      row.axis_value = value;
      row.controller = cell.controller;
      if (cell.result) {
        row.utilization = cell.result->utilization;
        row.loss_rate = cell.result->loss_rate;
        any_ok = true;
      } else {
        row.utilization = std::nan("");
        row.loss_rate = std::nan("");
        std::cerr << "sweep: " << cell.scenario << " + " << cell.controller
                  << " failed: " << cell.error << '\n';
      }
      rows.push_back(row);
    }
  }
  if (!any_ok) throw std::runtime_error("sweep: every run failed");

  const auto dir = prepare_out_dir(args.out_dir);
  aqmsim::write_sweep_csv(dir + "/sweep.csv", rows);
  std::cout << "sweep: " << rows.size() << " rows\n";
  return 0;
}

int cmd_compare(const CommonArgs& args) {
  auto cfg = load_config(args);
  if (args.dump_effective) return dump_config(cfg);
  const auto controllers = effective_controllers(cfg);

  const std::vector<aqmsim::ScenarioSpec> one{cfg.scenario};
  const auto cells = aqmsim::run_matrix(one, controllers, cfg.dt, cfg.trace_period);
  bool any_ok = false;
  for (const auto& cell : cells) {
    if (cell.result) {
      any_ok = true;
    } else {
      std::cerr << "compare: " << cell.controller << " failed: " << cell.error << '\n';
    }
  }
  if (!any_ok) throw std::runtime_error("compare: every run failed");

  const auto dir = prepare_out_dir(args.out_dir);
  aqmsim::write_compare_csv(dir + "/compare.csv", cells);
  std::cout << "compare " << cfg.scenario.name << ": " << cells.size()
            << " controllers\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TCP/AQM fluid-model simulation lab"};
  app.require_subcommand(1);

  CommonArgs args;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", args.config_path, "JSON config file");
    sub->add_option("--out", args.out_dir, "output directory (default: out)");
    sub->add_option("--seed", args.seed, "override the master seed");
    sub->add_option("--dt", args.dt, "override the integration step (seconds)");
    sub->add_flag("--dump-effective-config", args.dump_effective,
                  "print the fully resolved config and exit");
  };

  auto* run = app.add_subcommand("run", "simulate one scenario + controller");
  auto* tune = app.add_subcommand("tune", "swarm-tune an RBF-family controller");
  auto* sweep = app.add_subcommand("sweep", "utilization/loss sweep over users or delay");
  auto* compare = app.add_subcommand("compare", "all controller presets on one scenario");
  for (auto* sub : {run, tune, sweep, compare}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(args);
    if (tune->parsed()) return cmd_tune(args);
    if (sweep->parsed()) return cmd_sweep(args);
    return cmd_compare(args);
  } catch (const aqmsim::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const aqmsim::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSimulation;
  }
}
