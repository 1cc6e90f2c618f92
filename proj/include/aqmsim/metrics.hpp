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

#ifndef AQMSIM_METRICS_HPP_
#define AQMSIM_METRICS_HPP_

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "aqmsim/network.hpp"

namespace aqmsim {

struct TracePoint {
  double time = 0.0;     // seconds
  double queue = 0.0;    // packets
  double window = 0.0;   // packets
  double control = 0.0;  // held mark/drop probability
  double arrival = 0.0;  // packets/second
};

using Trace = std::vector<TracePoint>;

struct RunResult {
  Trace trace;
  double iae = 0.0;          // (1/T) * integral |q - q_d|
  double utilization = 0.0;  // fraction of capacity carried
  double loss_rate = 0.0;    // dropped fraction of arrivals
  double forced_loss = 0.0;  // packets discarded by the buffer clamp
  double duration = 0.0;     // seconds actually simulated
  double dt = 0.0;           // effective integration step
  double trace_period = 0.0; // effective trace sampling period
};

namespace detail {
inline void require_trace(const Trace& trace) {
  if (trace.size() < 2) throw std::invalid_argument("metrics: trace needs >= 2 samples");
}
}  // namespace detail

// Time-averaged absolute queue error from trace samples (trapezoid rule).
inline double trace_iae(const Trace& trace, double target_queue) {
  detail::require_trace(trace);
  double integral = 0.0;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    const double dt = trace[i].time - trace[i - 1].time;
    integral += 0.5 * dt * (std::abs(trace[i - 1].queue - target_queue) +
                            std::abs(trace[i].queue - target_queue));
  }
  return integral / (trace.back().time - trace.front().time);
}

// A backlogged link departs at capacity; an empty one departs at the arrival
// rate. Utilization is the time average of departures over capacity.
inline double link_departure(const TracePoint& s, const NetworkParams& params) {
  if (s.queue > 0.0) return params.capacity;
  return std::min(s.arrival, params.capacity);
}

inline double trace_utilization(const Trace& trace, const NetworkParams& params) {
  detail::require_trace(trace);
  double integral = 0.0;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    const double dt = trace[i].time - trace[i - 1].time;
    integral += 0.5 * dt * (link_departure(trace[i - 1], params) +
                            link_departure(trace[i], params));
  }
  return std::clamp(
      integral / ((trace.back().time - trace.front().time) * params.capacity), 0.0,
      1.0);
}

// Dropped fraction of offered traffic: early marks p * arrival plus packets
// removed by the buffer clamp, over total arrivals. Zero offered load counts
// as zero loss.
inline double trace_loss_rate(const Trace& trace, const NetworkParams& params,
                              double forced_loss_packets = 0.0) {
  (void)params;
  detail::require_trace(trace);
  double dropped = forced_loss_packets;
  double offered = 0.0;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    const double dt = trace[i].time - trace[i - 1].time;
    dropped += 0.5 * dt * (trace[i - 1].control * trace[i - 1].arrival +
                           trace[i].control * trace[i].arrival);
    offered += 0.5 * dt * (trace[i - 1].arrival + trace[i].arrival);
  }
  if (offered <= 0.0) return 0.0;
  return std::clamp(dropped / offered, 0.0, 1.0);
}

}  // namespace aqmsim

#endif  // AQMSIM_METRICS_HPP_
