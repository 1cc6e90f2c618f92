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

#ifndef AQMSIM_SIMULATE_HPP_
#define AQMSIM_SIMULATE_HPP_

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "aqmsim/controllers.hpp"
#include "aqmsim/fluid_model.hpp"
#include "aqmsim/metrics.hpp"
#include "aqmsim/network.hpp"

namespace aqmsim {

struct SimOptions {
  double duration = 100.0;       // seconds
  double initial_queue = 0.0;    // packets
  // Initial mean window; unset means the fluid equilibrium R(q0) * C / N(0),
  // which starts the run in regime instead of deep slow-start.
  std::optional<double> initial_window;
  double dt = 1e-3;              // requested step; shrunk to divide the control period
  double trace_period = kDefaultSamplePeriod;  // requested trace spacing

  void validate() const {
    if (!(duration > 0.0)) throw std::invalid_argument("simulate: duration must be > 0");
    if (!(dt > 0.0)) throw std::invalid_argument("simulate: dt must be > 0");
    if (!(trace_period > 0.0))
      throw std::invalid_argument("simulate: trace_period must be > 0");
    if (initial_queue < 0.0)
      throw std::invalid_argument("simulate: initial_queue must be >= 0");
    if (initial_window && !(*initial_window >= 0.0))
      throw std::invalid_argument("simulate: initial_window must be >= 0");
  }
};

// Closed loop of plant steps and controller ticks. The controller writes its
// output into the history line at emission time; the plant reads it back at
// t - R(t). Fully deterministic: same params, controller and options give a
// bit-identical RunResult.
inline RunResult simulate(const NetworkParams& params, const ControllerConfig& config,
                          const SimOptions& options) {
  params.validate();
  options.validate();
  Controller controller(config, params);

  // Quantize the step so controller ticks land exactly on the grid and the
  // dt <= Tp/4 resolution guard holds.
  const double control_period = controller.sample_period();
  const double dt_cap = std::min(options.dt, params.prop_delay / 4.0);
  const auto ticks_per_control = static_cast<long>(
      std::max(1.0, std::ceil(control_period / dt_cap - 1e-9)));
  const double dt = control_period / static_cast<double>(ticks_per_control);

  const auto steps_per_row = static_cast<long>(
      std::max(1.0, std::round(options.trace_period / dt)));
  const double trace_period = dt * static_cast<double>(steps_per_row);
  const auto rows = static_cast<long>(
      std::max(1.0, std::ceil(options.duration / trace_period - 1e-9)));
  const long total_steps = rows * steps_per_row;
  const double duration = trace_period * static_cast<double>(rows);

  SimState state;
  state.time = 0.0;
  state.queue = std::min(options.initial_queue, params.buffer_limit);
  state.window = options.initial_window.value_or(
      rtt(state.queue, params) * params.capacity / params.connections.at(0.0));

  controller.start(state);
  double arrival = arrival_rate(state.window, state.queue,
                                params.connections.at(0.0), params);
  double control = controller.tick(state, arrival);

  // Constant pre-history equal to the initial state (standard DDE start).
  PlantHistory history(dt, params.max_rtt() + 4.0 * dt,
                       {state.window, state.queue, control});
  const auto past0 = history.at(-rtt(state.queue, params));
  Rates rates = derivatives(
      state, Delayed{past0[kWindowChannel], past0[kQueueChannel], past0[kControlChannel]},
      params, params.connections.at(0.0));
  history.push({state.window, state.queue, control},
               {rates.window_rate, rates.queue_rate, 0.0});

  RunResult result;
  result.dt = dt;
  result.trace_period = trace_period;
  result.duration = duration;
  result.trace.reserve(static_cast<std::size_t>(rows) + 1);
  result.trace.push_back({0.0, state.queue, state.window, control, arrival});

  double abs_error = std::abs(state.queue - params.target_queue);
  double departure = state.queue > 0.0 ? params.capacity
                                       : std::min(arrival, params.capacity);
  double iae_integral = 0.0;
  double departure_integral = 0.0;
  double offered_integral = 0.0;
  double marked_integral = 0.0;

  for (long n = 1; n <= total_steps; ++n) {
    const StepResult advanced = step(state, history, control, params, dt, &rates);
    state = advanced.state;
    rates = advanced.node_rates;
    result.forced_loss += advanced.clamped_excess;

    const double n_now = params.connections.at(state.time);
    const double new_arrival = arrival_rate(state.window, state.queue, n_now, params);
    const double new_abs_error = std::abs(state.queue - params.target_queue);
    const double new_departure = state.queue > 0.0
                                     ? params.capacity
                                     : std::min(new_arrival, params.capacity);

    // Trapezoid accumulation over [t-dt, t]; the held control is constant on
    // the interval.
    iae_integral += 0.5 * dt * (abs_error + new_abs_error);
    departure_integral += 0.5 * dt * (departure + new_departure);
    offered_integral += 0.5 * dt * (arrival + new_arrival);
    marked_integral += 0.5 * dt * control * (arrival + new_arrival);

    abs_error = new_abs_error;
    departure = new_departure;
    arrival = new_arrival;

    if (n % ticks_per_control == 0) {
      control = controller.tick(state, arrival);
      history.set_latest(kControlChannel, control);
    }
    if (n % steps_per_row == 0)
      result.trace.push_back({state.time, state.queue, state.window, control, arrival});
  }

  result.iae = iae_integral / duration;
  result.utilization =
      std::clamp(departure_integral / (duration * params.capacity), 0.0, 1.0);
  result.loss_rate =
      offered_integral > 0.0
          ? std::clamp((marked_integral + result.forced_loss) / offered_integral, 0.0, 1.0)
          : 0.0;
  return result;
}

}  // namespace aqmsim

#endif  // AQMSIM_SIMULATE_HPP_
