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

#ifndef AQMSIM_CONFIG_HPP_
#define AQMSIM_CONFIG_HPP_

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "aqmsim/pso.hpp"
#include "aqmsim/scenarios.hpp"
#include "aqmsim/tuning.hpp"

namespace aqmsim {

// Anything wrong with a config file: unreadable, malformed, or violating an
// invariant. The CLI maps this to its parse-error exit code.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TuneSettings {
  SwarmConfig swarm;
  ParameterLayout layout;
  std::vector<double> initial_queues;  // empty = even 11-point grid
  bool randomized_initial_queues = false;
  std::pair<double, double> weight_bounds{-1.0, 1.0};
  std::pair<double, double> integral_gain_bounds{0.0, 0.01};
  std::optional<std::pair<double, double>> center_bounds;
  std::optional<std::pair<double, double>> spread_bounds;
};

struct RunConfig {
  ScenarioSpec scenario;
  std::optional<NamedController> controller;  // run / tune subject
  std::vector<NamedController> controllers;   // sweep / compare set
  SweepSpec::Axis sweep_axis = SweepSpec::Axis::Users;
  std::vector<double> sweep_values;  // empty = default grid for the axis
  TuneSettings tune;
  std::uint64_t seed = 1;
  double dt = 1e-3;
  double trace_period = kDefaultSamplePeriod;
};

namespace detail {

using nlohmann::json;

inline double number_at(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw ConfigError("config: '" + key + "' must be a number");
  return j[key].get<double>();
}

inline std::vector<double> number_list(const json& j, const std::string& key) {
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw ConfigError("config: '" + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

inline ScenarioSpec parse_scenario(const json& j) {
  ScenarioSpec spec;
  if (j.contains("preset")) spec = scenario_preset(j["preset"].get<std::string>());
  if (j.contains("name")) spec.name = j["name"].get<std::string>();
  spec.capacity = number_at(j, "capacity", spec.capacity);
  spec.bottleneck_delay = number_at(j, "bottleneck_delay", spec.bottleneck_delay);
  spec.access_delay = number_at(j, "access_delay", spec.access_delay);
  spec.buffer_limit = number_at(j, "buffer_limit", spec.buffer_limit);
  spec.target_queue = number_at(j, "target_queue", spec.target_queue);
  spec.duration = number_at(j, "duration", spec.duration);
  spec.initial_queue = number_at(j, "initial_queue", spec.initial_queue);
  if (j.contains("initial_window") && !j["initial_window"].is_null())
    spec.initial_window = j["initial_window"].get<double>();
  if (j.contains("connections")) {
    const auto& c = j["connections"];
    spec.connections.clear();
    if (c.is_number()) {
      spec.connections.push_back({0.0, c.get<double>()});
    } else {
      for (const auto& seg : c) {
        if (!seg.is_array() || seg.size() != 2)
          throw ConfigError("config: connections segments are [start, count] pairs");
        spec.connections.push_back({seg[0].get<double>(), seg[1].get<double>()});
      }
    }
  }
  return spec;
}

inline NamedController parse_controller(const json& j) {
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    return {name, controller_preset(name)};
  }
  if (!j.is_object() || !j.contains("scheme"))
    throw ConfigError("config: controller needs a 'scheme' (or use a preset name)");
  const auto scheme = j["scheme"].get<std::string>();
  ControllerConfig cfg = controller_preset(scheme);

  if (auto* rbf = std::get_if<RbfConfig>(&cfg)) {
    if (j.contains("weights")) rbf->weights = number_list(j, "weights");
    if (j.contains("centers")) rbf->centers = number_list(j, "centers");
    if (j.contains("spreads")) rbf->spreads = number_list(j, "spreads");
    if (j.value("spread_is_variance", false))
      for (auto& s : rbf->spreads) s = std::sqrt(s);
    rbf->sample_period = number_at(j, "sample_period", rbf->sample_period);
    if (j.contains("weights") && !j.contains("centers") &&
        rbf->centers.size() != rbf->weights.size())
      throw ConfigError("config: rbf weights need matching centers");
  } else if (auto* irbf = std::get_if<IrbfConfig>(&cfg)) {
    if (j.contains("weights")) irbf->rbf.weights = number_list(j, "weights");
    if (j.contains("centers")) irbf->rbf.centers = number_list(j, "centers");
    if (j.contains("spreads")) irbf->rbf.spreads = number_list(j, "spreads");
    if (j.value("spread_is_variance", false))
      for (auto& s : irbf->rbf.spreads) s = std::sqrt(s);
    irbf->rbf.sample_period = number_at(j, "sample_period", irbf->rbf.sample_period);
    irbf->integral_gain = number_at(j, "integral_gain", irbf->integral_gain);
  } else if (auto* pi = std::get_if<PiConfig>(&cfg)) {
    pi->gain_a = number_at(j, "a", pi->gain_a);
    pi->gain_b = number_at(j, "b", pi->gain_b);
    pi->sample_period = number_at(j, "sample_period", pi->sample_period);
  } else if (auto* rem = std::get_if<RemConfig>(&cfg)) {
    rem->gamma = number_at(j, "gamma", rem->gamma);
    rem->phi = number_at(j, "phi", rem->phi);
    rem->sample_period = number_at(j, "sample_period", rem->sample_period);
  } else if (auto* ared = std::get_if<AredConfig>(&cfg)) {
    ared->min_threshold = number_at(j, "min_threshold", ared->min_threshold);
    ared->max_threshold = number_at(j, "max_threshold", ared->max_threshold);
    ared->queue_weight = number_at(j, "queue_weight", ared->queue_weight);
    ared->max_p_initial = number_at(j, "max_p_initial", ared->max_p_initial);
    ared->max_p_min = number_at(j, "max_p_min", ared->max_p_min);
    ared->max_p_max = number_at(j, "max_p_max", ared->max_p_max);
    ared->increment = number_at(j, "increment", ared->increment);
    ared->decrement = number_at(j, "decrement", ared->decrement);
    ared->adaptation_interval =
        number_at(j, "adaptation_interval", ared->adaptation_interval);
    ared->sample_period = number_at(j, "sample_period", ared->sample_period);
  } else if (auto* tail = std::get_if<DropTailConfig>(&cfg)) {
    tail->sample_period = number_at(j, "sample_period", tail->sample_period);
  }

  validate(cfg);
  return {j.value("name", scheme), cfg};
}

inline json scenario_json(const ScenarioSpec& spec) {
  json j;
  j["name"] = spec.name;
  j["capacity"] = spec.capacity;
  j["bottleneck_delay"] = spec.bottleneck_delay;
  j["access_delay"] = spec.access_delay;
  j["buffer_limit"] = spec.buffer_limit;
  j["target_queue"] = spec.target_queue;
  j["duration"] = spec.duration;
  j["initial_queue"] = spec.initial_queue;
  if (spec.initial_window) j["initial_window"] = *spec.initial_window;
  json segs = json::array();
  for (const auto& seg : spec.connections) segs.push_back({seg.start, seg.count});
  j["connections"] = segs;
  return j;
}

inline json controller_json(const NamedController& named) {
  json j;
  j["name"] = named.name;
  j["scheme"] = scheme_name(named.config);

  struct Writer {
    json& j;
    void operator()(const RbfConfig& c) const {
      j["weights"] = c.weights;
      j["centers"] = c.centers;
      j["spreads"] = c.spreads;
      j["sample_period"] = c.sample_period;
    }
    void operator()(const IrbfConfig& c) const {
      (*this)(c.rbf);
      j["integral_gain"] = c.integral_gain;
    }
    void operator()(const PiConfig& c) const {
      j["a"] = c.gain_a;
      j["b"] = c.gain_b;
      j["sample_period"] = c.sample_period;
    }
    void operator()(const RemConfig& c) const {
      j["gamma"] = c.gamma;
      j["phi"] = c.phi;
      j["sample_period"] = c.sample_period;
    }
    void operator()(const AredConfig& c) const {
      j["min_threshold"] = c.min_threshold;
      j["max_threshold"] = c.max_threshold;
      j["queue_weight"] = c.queue_weight;
      j["max_p_initial"] = c.max_p_initial;
      j["max_p_min"] = c.max_p_min;
      j["max_p_max"] = c.max_p_max;
      j["increment"] = c.increment;
      j["decrement"] = c.decrement;
      j["adaptation_interval"] = c.adaptation_interval;
      j["sample_period"] = c.sample_period;
    }
    void operator()(const DropTailConfig& c) const {
      j["sample_period"] = c.sample_period;
    }
  };
  std::visit(Writer{j}, named.config);
  return j;
}

}  // namespace detail

inline RunConfig parse_config(const nlohmann::json& j) {
  try {
    RunConfig cfg;
    if (j.contains("scenario")) cfg.scenario = detail::parse_scenario(j["scenario"]);
    if (j.contains("controller"))
      cfg.controller = detail::parse_controller(j["controller"]);
    if (j.contains("controllers")) {
      if (j["controllers"].empty())
        throw ConfigError("config: controllers list is empty");
      for (const auto& c : j["controllers"])
        cfg.controllers.push_back(detail::parse_controller(c));
    }
    if (j.contains("sweep")) {
      const auto& s = j["sweep"];
      const auto axis = s.value("axis", std::string("users"));
      if (axis == "users") {
        cfg.sweep_axis = SweepSpec::Axis::Users;
      } else if (axis == "prop_delay") {
        cfg.sweep_axis = SweepSpec::Axis::PropDelay;
      } else {
        throw ConfigError("config: sweep axis must be 'users' or 'prop_delay'");
      }
      if (s.contains("values")) cfg.sweep_values = detail::number_list(s, "values");
    }
    if (j.contains("tune")) {
      const auto& t = j["tune"];
      auto& swarm = cfg.tune.swarm;
      swarm.max_iterations =
          static_cast<int>(detail::number_at(t, "max_iterations", swarm.max_iterations));
      swarm.population =
          static_cast<int>(detail::number_at(t, "population", swarm.population));
      swarm.max_velocity = detail::number_at(t, "max_velocity", swarm.max_velocity);
      swarm.inertia_initial =
          detail::number_at(t, "inertia_initial", swarm.inertia_initial);
      swarm.inertia_final = detail::number_at(t, "inertia_final", swarm.inertia_final);
      swarm.accel_cognitive =
          detail::number_at(t, "accel_cognitive", swarm.accel_cognitive);
      swarm.accel_social = detail::number_at(t, "accel_social", swarm.accel_social);
      swarm.min_error_gradient =
          detail::number_at(t, "min_error_gradient", swarm.min_error_gradient);
      swarm.gradient_window =
          static_cast<int>(detail::number_at(t, "gradient_window", swarm.gradient_window));
      swarm.validate();
      cfg.tune.layout.tune_centers = t.value("tune_centers", false);
      cfg.tune.layout.tune_spreads = t.value("tune_spreads", false);
      if (t.contains("initial_queues"))
        cfg.tune.initial_queues = detail::number_list(t, "initial_queues");
      cfg.tune.randomized_initial_queues = t.value("randomized_initial_queues", false);
      const auto bounds_pair = [&](const char* key, std::pair<double, double> fallback) {
        if (!t.contains(key)) return fallback;
        const auto v = detail::number_list(t, key);
        if (v.size() != 2 || !(v[0] < v[1]))
          throw ConfigError(std::string("config: '") + key + "' must be [lower, upper]");
        return std::make_pair(v[0], v[1]);
      };
      cfg.tune.weight_bounds = bounds_pair("weight_bounds", cfg.tune.weight_bounds);
      cfg.tune.integral_gain_bounds =
          bounds_pair("integral_gain_bounds", cfg.tune.integral_gain_bounds);
      if (t.contains("center_bounds"))
        cfg.tune.center_bounds = bounds_pair("center_bounds", {0, 0});
      if (t.contains("spread_bounds"))
        cfg.tune.spread_bounds = bounds_pair("spread_bounds", {0, 0});
    }
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    cfg.dt = detail::number_at(j, "dt", cfg.dt);
    cfg.trace_period = detail::number_at(j, "trace_period", cfg.trace_period);
    if (!(cfg.dt > 0.0)) throw ConfigError("config: dt must be > 0");
    if (!(cfg.trace_period > 0.0)) throw ConfigError("config: trace_period must be > 0");
    cfg.scenario.network();  // validates the scenario invariants
    return cfg;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

inline RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
  return parse_config(j);
}

// Fully resolved view of a run: re-parsing it reproduces the same run.
inline nlohmann::json effective_config(const RunConfig& cfg) {
  nlohmann::json j;
  j["scenario"] = detail::scenario_json(cfg.scenario);
  if (cfg.controller) j["controller"] = detail::controller_json(*cfg.controller);
  if (!cfg.controllers.empty()) {
    auto list = nlohmann::json::array();
    for (const auto& c : cfg.controllers) list.push_back(detail::controller_json(c));
    j["controllers"] = list;
  }
  j["sweep"]["axis"] =
      cfg.sweep_axis == SweepSpec::Axis::Users ? "users" : "prop_delay";
  j["sweep"]["values"] =
      cfg.sweep_values.empty() ? default_sweep_values(cfg.sweep_axis) : cfg.sweep_values;
  auto& t = j["tune"];
  const auto& swarm = cfg.tune.swarm;
  t["max_iterations"] = swarm.max_iterations;
  t["population"] = swarm.population;
  t["max_velocity"] = swarm.max_velocity;
  t["inertia_initial"] = swarm.inertia_initial;
  t["inertia_final"] = swarm.inertia_final;
  t["accel_cognitive"] = swarm.accel_cognitive;
  t["accel_social"] = swarm.accel_social;
  t["min_error_gradient"] = swarm.min_error_gradient;
  t["gradient_window"] = swarm.gradient_window;
  t["tune_centers"] = cfg.tune.layout.tune_centers;
  t["tune_spreads"] = cfg.tune.layout.tune_spreads;
  t["randomized_initial_queues"] = cfg.tune.randomized_initial_queues;
  if (!cfg.tune.initial_queues.empty()) t["initial_queues"] = cfg.tune.initial_queues;
  t["weight_bounds"] = {cfg.tune.weight_bounds.first, cfg.tune.weight_bounds.second};
  t["integral_gain_bounds"] = {cfg.tune.integral_gain_bounds.first,
                               cfg.tune.integral_gain_bounds.second};
  if (cfg.tune.center_bounds)
    t["center_bounds"] = {cfg.tune.center_bounds->first, cfg.tune.center_bounds->second};
  if (cfg.tune.spread_bounds)
    t["spread_bounds"] = {cfg.tune.spread_bounds->first, cfg.tune.spread_bounds->second};
  j["seed"] = cfg.seed;
  j["dt"] = cfg.dt;
  j["trace_period"] = cfg.trace_period;
  return j;
}

// Search box assembled from the template controller and any config overrides.
inline Bounds tune_bounds(const ControllerConfig& config, const NetworkParams& params,
                          const TuneSettings& settings) {
  Bounds bounds = default_bounds(config, params, settings.layout);
  const RbfConfig& rbf = detail::rbf_part(config);
  const std::size_t k = rbf.weights.size();
  for (std::size_t i = 0; i < k; ++i) {
    bounds.lower[i] = settings.weight_bounds.first;
    bounds.upper[i] = settings.weight_bounds.second;
  }
  std::size_t cursor = k;
  if (std::holds_alternative<IrbfConfig>(config)) {
    bounds.lower[cursor] = settings.integral_gain_bounds.first;
    bounds.upper[cursor] = settings.integral_gain_bounds.second;
    ++cursor;
  }
  if (settings.layout.tune_centers) {
    for (std::size_t i = 0; i < k; ++i, ++cursor) {
      if (settings.center_bounds) {
        bounds.lower[cursor] = settings.center_bounds->first;
        bounds.upper[cursor] = settings.center_bounds->second;
      }
    }
  }
  if (settings.layout.tune_spreads) {
    for (std::size_t i = 0; i < k; ++i, ++cursor) {
      if (settings.spread_bounds) {
        bounds.lower[cursor] = settings.spread_bounds->first;
        bounds.upper[cursor] = settings.spread_bounds->second;
      }
    }
  }
  return bounds;
}

}  // namespace aqmsim

#endif  // AQMSIM_CONFIG_HPP_
