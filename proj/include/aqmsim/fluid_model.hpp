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

#ifndef AQMSIM_FLUID_MODEL_HPP_
#define AQMSIM_FLUID_MODEL_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "aqmsim/delay_line.hpp"
#include "aqmsim/integrate.hpp"
#include "aqmsim/network.hpp"

namespace aqmsim {

// Delay-line channel layout for the TCP/AQM plant.
inline constexpr std::size_t kWindowChannel = 0;
inline constexpr std::size_t kQueueChannel = 1;
inline constexpr std::size_t kControlChannel = 2;
using PlantHistory = DelayLine<3>;

// Plant quantities evaluated at t - R(t).
struct Delayed {
  double window = 0.0;
  double queue = 0.0;
  double control = 0.0;
};

struct Rates {
  double window_rate = 0.0;
  double queue_rate = 0.0;
};

// Nonlinear time-delayed TCP window / queue dynamics with saturated input:
//
//   dw/dt = 1/R(t) - (w(t)/2) * (w(t-R)/R(t-R)) * sat(u)
//   dq/dt = -C + N(t) * w(t) / R(t)         (lower-bounded at zero queue)
//
// The additive-increase term 1/R grows the window each round trip; the
// multiplicative-decrease term halves it in proportion to the delayed
// mark/drop probability.
inline Rates derivatives(const SimState& state, const Delayed& delayed,
                         const NetworkParams& params, double connections) {
  const double window = std::max(state.window, 0.0);
  const double queue = std::clamp(state.queue, 0.0, params.buffer_limit);
  const double r_now = rtt(queue, params);

  const double delayed_window = std::max(delayed.window, 0.0);
  const double delayed_queue = std::clamp(delayed.queue, 0.0, params.buffer_limit);
  const double r_delayed = rtt(delayed_queue, params);
  const double control = saturate(delayed.control);

  Rates rates;
  rates.window_rate =
      1.0 / r_now - 0.5 * window * (delayed_window / r_delayed) * control;

  const double mismatch = connections * window / r_now - params.capacity;
  rates.queue_rate = state.queue > 0.0 ? mismatch : std::max(0.0, mismatch);
  return rates;
}

struct StepResult {
  SimState state;
  Rates node_rates;             // derivative at the new state (next step's k1)
  double clamped_excess = 0.0;  // packets discarded by the finite buffer
};

// Advances the plant by one fixed step, reading delayed terms from `history`
// and appending the new sample (with the held control value) to it. The queue
// is clamped to [0, buffer_limit]; whatever the clamp removes at the top is
// reported as forced Drop-Tail loss.
inline StepResult step(const SimState& state, PlantHistory& history,
                       double control, const NetworkParams& params, double dt,
                       const Rates* k1 = nullptr) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be > 0");
  if (dt > params.prop_delay / 4.0)
    throw std::invalid_argument("step: dt must not exceed prop_delay / 4");

  const auto f = [&](double t, const std::array<double, 2>& y) {
    const SimState stage{y[0], y[1], t};
    const double stage_queue = std::clamp(y[1], 0.0, params.buffer_limit);
    const auto past = history.at(t - rtt(stage_queue, params));
    const Delayed delayed{past[kWindowChannel], past[kQueueChannel],
                          past[kControlChannel]};
    const Rates r = derivatives(stage, delayed, params, params.connections.at(t));
    return std::array<double, 2>{r.window_rate, r.queue_rate};
  };

  std::array<double, 2> y{state.window, state.queue};
  const std::array<double, 2> k1_arr =
      k1 ? std::array<double, 2>{k1->window_rate, k1->queue_rate} : f(state.time, y);
  y = rk4_step<2>(f, state.time, y, dt, &k1_arr);

  StepResult result;
  result.state.time = state.time + dt;
  result.state.window = std::max(y[0], 0.0);
  result.state.queue = y[1];
  if (result.state.queue > params.buffer_limit) {
    result.clamped_excess = result.state.queue - params.buffer_limit;
    result.state.queue = params.buffer_limit;
  } else if (result.state.queue < 0.0) {
    result.state.queue = 0.0;
  }

  const auto node = f(result.state.time,
                      {result.state.window, result.state.queue});
  result.node_rates = Rates{node[0], node[1]};

  // Store slopes consistent with the clamped trajectory so interpolated
  // history does not overshoot the buffer rail.
  double stored_queue_rate = node[1];
  if (result.state.queue >= params.buffer_limit && stored_queue_rate > 0.0)
    stored_queue_rate = 0.0;
  history.push({result.state.window, result.state.queue, control},
               {node[0], stored_queue_rate, 0.0});
  return result;
}

}  // namespace aqmsim

#endif  // AQMSIM_FLUID_MODEL_HPP_
