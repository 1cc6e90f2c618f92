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

#ifndef AQMSIM_TUNING_HPP_
#define AQMSIM_TUNING_HPP_

#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "aqmsim/controllers.hpp"
#include "aqmsim/pso.hpp"
#include "aqmsim/simulate.hpp"

namespace aqmsim {

// Which controller fields the optimizer may move. Weights (and the integral
// gain) are always free; centers and spreads stay fixed unless asked for.
struct ParameterLayout {
  bool tune_centers = false;
  bool tune_spreads = false;
};

namespace detail {
inline const RbfConfig& rbf_part(const ControllerConfig& config) {
  if (const auto* rbf = std::get_if<RbfConfig>(&config)) return *rbf;
  if (const auto* irbf = std::get_if<IrbfConfig>(&config)) return irbf->rbf;
  throw std::invalid_argument("tuning: scheme '" + scheme_name(config) +
                              "' has no tunable parameters");
}
}  // namespace detail

inline bool is_tunable(const ControllerConfig& config) {
  return std::holds_alternative<RbfConfig>(config) ||
         std::holds_alternative<IrbfConfig>(config);
}

inline std::vector<std::string> parameter_names(const ControllerConfig& config,
                                                const ParameterLayout& layout = {}) {
  const RbfConfig& rbf = detail::rbf_part(config);
  std::vector<std::string> names;
  const std::size_t k = rbf.weights.size();
  for (std::size_t i = 1; i <= k; ++i) names.push_back("w" + std::to_string(i));
  if (std::holds_alternative<IrbfConfig>(config)) names.push_back("w_I");
  if (layout.tune_centers)
    for (std::size_t i = 1; i <= k; ++i) names.push_back("c" + std::to_string(i));
  if (layout.tune_spreads)
    for (std::size_t i = 1; i <= k; ++i) names.push_back("sigma" + std::to_string(i));
  return names;
}

// Writes an optimizer position into a copy of the template config.
inline ControllerConfig apply_position(const ControllerConfig& config,
                                       std::span<const double> position,
                                       const ParameterLayout& layout = {}) {
  const std::size_t expected = parameter_names(config, layout).size();
  if (position.size() != expected)
    throw std::invalid_argument("tuning: position has wrong dimension");

  ControllerConfig result = config;
  RbfConfig* rbf = nullptr;
  if (auto* plain = std::get_if<RbfConfig>(&result)) rbf = plain;
  if (auto* irbf = std::get_if<IrbfConfig>(&result)) rbf = &irbf->rbf;

  std::size_t cursor = 0;
  const std::size_t k = rbf->weights.size();
  for (std::size_t i = 0; i < k; ++i) rbf->weights[i] = position[cursor++];
  if (auto* irbf = std::get_if<IrbfConfig>(&result))
    irbf->integral_gain = position[cursor++];
  if (layout.tune_centers)
    for (std::size_t i = 0; i < k; ++i) rbf->centers[i] = position[cursor++];
  if (layout.tune_spreads)
    for (std::size_t i = 0; i < k; ++i) rbf->spreads[i] = position[cursor++];
  return result;
}

// Search box: weights in [-1, 1] (Table 3 sits exactly on the rim), integral
// gain in [0, 0.01]; extended dimensions scale with the buffer.
inline Bounds default_bounds(const ControllerConfig& config, const NetworkParams& params,
                             const ParameterLayout& layout = {}) {
  const RbfConfig& rbf = detail::rbf_part(config);
  Bounds bounds;
  const std::size_t k = rbf.weights.size();
  for (std::size_t i = 0; i < k; ++i) {
    bounds.lower.push_back(-1.0);
    bounds.upper.push_back(1.0);
  }
  if (std::holds_alternative<IrbfConfig>(config)) {
    bounds.lower.push_back(0.0);
    bounds.upper.push_back(0.01);
  }
  if (layout.tune_centers)
    for (std::size_t i = 0; i < k; ++i) {
      bounds.lower.push_back(-params.buffer_limit);
      bounds.upper.push_back(params.buffer_limit);
    }
  if (layout.tune_spreads)
    for (std::size_t i = 0; i < k; ++i) {
      bounds.lower.push_back(1.0);
      bounds.upper.push_back(params.buffer_limit);
    }
  return bounds;
}

struct IaeObjectiveSpec {
  std::vector<double> initial_queues;  // empty => even grid of 11 over [0, buffer]
  double duration = 100.0;
  double dt = 1e-3;
  double trace_period = kDefaultSamplePeriod;
};

inline std::vector<double> default_initial_queues(const NetworkParams& params,
                                                  int count = 11) {
  std::vector<double> queues;
  for (int i = 0; i < count; ++i)
    queues.push_back(params.buffer_limit * static_cast<double>(i) /
                     static_cast<double>(count - 1));
  return queues;
}

// Mean IAE over the initial-queue set; any simulation failure poisons the
// evaluation with +inf rather than aborting the search.
inline Objective make_iae_objective(const ControllerConfig& config,
                                    const NetworkParams& params,
                                    IaeObjectiveSpec spec,
                                    const ParameterLayout& layout = {}) {
  if (!is_tunable(config))
    throw std::invalid_argument("tuning: scheme '" + scheme_name(config) +
                                "' is not tunable");
  if (spec.initial_queues.empty())
    spec.initial_queues = default_initial_queues(params);

  return [config, params, spec, layout](const std::vector<double>& position) {
    try {
      const ControllerConfig candidate = apply_position(config, position, layout);
      double total = 0.0;
      for (double q0 : spec.initial_queues) {
        SimOptions options;
        options.duration = spec.duration;
        options.initial_queue = q0;
        options.dt = spec.dt;
        options.trace_period = spec.trace_period;
        total += simulate(params, candidate, options).iae;
      }
      return total / static_cast<double>(spec.initial_queues.size());
    } catch (...) {
      return std::numeric_limits<double>::infinity();
    }
  };
}

}  // namespace aqmsim

#endif  // AQMSIM_TUNING_HPP_
