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

#ifndef AQMSIM_SCENARIOS_HPP_
#define AQMSIM_SCENARIOS_HPP_

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "aqmsim/controllers.hpp"
#include "aqmsim/simulate.hpp"

namespace aqmsim {

// One dumbbell experiment: a bottleneck plus per-side access links whose
// propagation folds into the single fluid-model RTT as Tp = bottleneck + 2 *
// access.
struct ScenarioSpec {
  std::string name = "nominal";
  double capacity = 1250.0;         // packets/second (10 Mbps of 1000-byte packets)
  double bottleneck_delay = 0.06;   // seconds
  double access_delay = 0.0;        // seconds, each side
  double buffer_limit = 300.0;      // packets
  double target_queue = 150.0;      // packets
  double duration = 100.0;          // seconds
  double initial_queue = 0.0;       // packets
  std::optional<double> initial_window;  // packets; unset = fluid equilibrium
  std::vector<ConnectionSegment> connections{{0.0, 100.0}};

  double folded_delay() const { return bottleneck_delay + 2.0 * access_delay; }

  NetworkParams network() const {
    NetworkParams params;
    params.capacity = capacity;
    params.prop_delay = folded_delay();
    params.connections = ConnectionSchedule(connections);
    params.buffer_limit = buffer_limit;
    params.target_queue = target_queue;
    params.validate();
    if (!(duration > 0.0)) throw std::invalid_argument("scenario: duration must be > 0");
    return params;
  }

  SimOptions options(double dt = 1e-3,
                     double trace_period = kDefaultSamplePeriod) const {
    SimOptions opt;
    opt.duration = duration;
    opt.initial_queue = initial_queue;
    opt.initial_window = initial_window;
    opt.dt = dt;
    opt.trace_period = trace_period;
    return opt;
  }
};

inline ScenarioSpec scenario_preset(const std::string& name) {
  ScenarioSpec spec;
  spec.name = name;
  if (name == "nominal") {
    return spec;
  }
  if (name == "dynamic_load") {
    // 100 connections, +30 at 30 s, down to 70 at 60 s, back to 100 at 80 s.
    spec.connections = {{0.0, 100.0}, {30.0, 130.0}, {60.0, 70.0}, {80.0, 100.0}};
    return spec;
  }
  if (name == "short_delay") {
    spec.bottleneck_delay = 0.010;
    spec.access_delay = 0.002;
    return spec;
  }
  if (name == "long_delay") {
    spec.bottleneck_delay = 0.140;
    spec.access_delay = 0.020;
    return spec;
  }
  throw std::invalid_argument("unknown scenario preset '" + name + "'");
}

// Published parameter sets for the six compared schemes. RBF and IRBF carry
// the swarm-optimized weights on centers -150..150 step 75 with spread 40.
inline ControllerConfig controller_preset(const std::string& name) {
  if (name == "rbf") {
    RbfConfig cfg;
    cfg.weights = {-1.0, -1.0, 0.3397, 0.3372, 1.0};
    cfg.centers = {-150.0, -75.0, 0.0, 75.0, 150.0};
    cfg.spreads = {40.0, 40.0, 40.0, 40.0, 40.0};
    return cfg;
  }
  if (name == "irbf") {
    IrbfConfig cfg;
    cfg.rbf.weights = {-1.0, -0.9612, 0.3445, 0.9939, 0.9979};
    cfg.rbf.centers = {-150.0, -75.0, 0.0, 75.0, 150.0};
    cfg.rbf.spreads = {40.0, 40.0, 40.0, 40.0, 40.0};
    cfg.integral_gain = 7.0813e-4;
    return cfg;
  }
  if (name == "pi") return PiConfig{};
  if (name == "rem") return RemConfig{};
  if (name == "ared") return AredConfig{};
  if (name == "droptail") return DropTailConfig{};
  throw std::invalid_argument("unknown controller preset '" + name + "'");
}

inline const std::vector<std::string>& controller_preset_names() {
  static const std::vector<std::string> names = {"rbf",  "irbf", "pi",
                                                 "rem",  "ared", "droptail"};
  return names;
}

struct SweepSpec {
  enum class Axis { Users, PropDelay };
  Axis axis = Axis::Users;
  std::vector<double> values;
  ScenarioSpec base;

  void validate() const {
    if (values.empty()) throw std::invalid_argument("sweep: no axis values");
    for (std::size_t i = 1; i < values.size(); ++i)
      if (!(values[i] > values[i - 1]))
        throw std::invalid_argument("sweep: axis values must strictly increase");
  }

  ScenarioSpec scenario_for(double value) const {
    ScenarioSpec spec = base;
    if (axis == Axis::Users) {
      spec.connections = {{0.0, value}};
      spec.name = base.name + "/users=" + std::to_string(value);
    } else {
      spec.bottleneck_delay = value;
      spec.access_delay = 0.0;
      spec.name = base.name + "/delay=" + std::to_string(value);
    }
    return spec;
  }
};

// Default grids bracketing the studied ranges: 70..160 users by 10,
// 20..140 ms by 20 ms.
inline std::vector<double> default_sweep_values(SweepSpec::Axis axis) {
  std::vector<double> values;
  if (axis == SweepSpec::Axis::Users) {
    for (int n = 70; n <= 160; n += 10) values.push_back(n);
  } else {
    for (int ms = 20; ms <= 140; ms += 20) values.push_back(ms / 1000.0);
  }
  return values;
}

struct NamedController {
  std::string name;
  ControllerConfig config;
};

struct MatrixCell {
  std::string scenario;
  std::string controller;
  std::optional<RunResult> result;
  std::string error;  // set when the run failed
};

// Cartesian scenarios x controllers in deterministic order; a failed run is
// recorded in its cell without aborting the rest.
inline std::vector<MatrixCell> run_matrix(std::span<const ScenarioSpec> scenarios,
                                          std::span<const NamedController> controllers,
                                          double dt = 1e-3,
                                          double trace_period = kDefaultSamplePeriod) {
  if (scenarios.empty() || controllers.empty())
    throw std::invalid_argument("run_matrix: empty scenario or controller list");
  std::vector<MatrixCell> cells;
  cells.reserve(scenarios.size() * controllers.size());
  for (const auto& scenario : scenarios) {
    for (const auto& controller : controllers) {
      MatrixCell cell;
      cell.scenario = scenario.name;
      cell.controller = controller.name;
      try {
        cell.result = simulate(scenario.network(), controller.config,
                               scenario.options(dt, trace_period));
      } catch (const std::exception& e) {
        cell.error = e.what();
      }
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

}  // namespace aqmsim

#endif  // AQMSIM_SCENARIOS_HPP_
