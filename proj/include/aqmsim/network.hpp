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

#ifndef AQMSIM_NETWORK_HPP_
#define AQMSIM_NETWORK_HPP_

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace aqmsim {

// One segment of the piecewise-constant connection-count timeline: `count`
// TCP connections are active from `start` until the next segment begins.
struct ConnectionSegment {
  double start = 0.0;  // seconds
  double count = 0.0;  // connections, >= 1
};

// Left-closed piecewise-constant N(t). The first segment must start at t = 0;
// the last segment extends to the end of the run.
class ConnectionSchedule {
 public:
  ConnectionSchedule() : segments_{{0.0, 1.0}} {}

  explicit ConnectionSchedule(std::vector<ConnectionSegment> segments)
      : segments_(std::move(segments)) {
    if (segments_.empty())
      throw std::invalid_argument("connection schedule: no segments");
    if (segments_.front().start != 0.0)
      throw std::invalid_argument("connection schedule: first segment must start at t = 0");
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      if (!(segments_[i].count >= 1.0))
        throw std::invalid_argument("connection schedule: every segment needs N >= 1");
      if (i > 0 && !(segments_[i].start > segments_[i - 1].start))
        throw std::invalid_argument("connection schedule: segment starts must increase");
    }
  }

  static ConnectionSchedule constant(double count) {
    return ConnectionSchedule({{0.0, count}});
  }

  double at(double t) const {
    // Segments are few (the paper's scenarios use at most four); linear scan,
    // with the common constant-load case short-circuited.
    double count = segments_.front().count;
    if (segments_.size() == 1) return count;
    for (const auto& seg : segments_) {
      if (t < seg.start) break;
      count = seg.count;
    }
    return count;
  }

  const std::vector<ConnectionSegment>& segments() const { return segments_; }

 private:
  std::vector<ConnectionSegment> segments_;
};

// Constants of the bottleneck link and the regulation target.
struct NetworkParams {
  double capacity = 1250.0;     // C, packets/second
  double prop_delay = 0.06;     // Tp, seconds (all propagation folded in)
  ConnectionSchedule connections = ConnectionSchedule::constant(100.0);
  double buffer_limit = 300.0;  // packets
  double target_queue = 150.0;  // q_d, packets

  void validate() const {
    if (!(capacity > 0.0)) throw std::invalid_argument("capacity must be > 0");
    if (!(prop_delay > 0.0)) throw std::invalid_argument("prop_delay must be > 0");
    if (!(buffer_limit > 0.0)) throw std::invalid_argument("buffer_limit must be > 0");
    if (!(target_queue > 0.0 && target_queue < buffer_limit))
      throw std::invalid_argument("target_queue must lie in (0, buffer_limit)");
  }

  // Largest possible round-trip time given the buffer bound.
  double max_rtt() const { return buffer_limit / capacity + prop_delay; }
};

// Instantaneous plant state.
struct SimState {
  double window = 1.0;  // w, packets
  double queue = 0.0;   // q, packets
  double time = 0.0;    // t, seconds
};

// R(t) = q/C + Tp.
inline double rtt(double queue, const NetworkParams& params) {
  return queue / params.capacity + params.prop_delay;
}

inline constexpr double kControlMin = 0.0;
inline constexpr double kControlMax = 1.0;

// Input saturation: drop/mark probabilities live in [0, 1].
inline double saturate(double u) {
  if (!std::isfinite(u)) throw std::invalid_argument("saturate: non-finite input");
  if (u < kControlMin) return kControlMin;
  if (u > kControlMax) return kControlMax;
  return u;
}

// Aggregate TCP arrival rate at the router, N(t) * w / R.
inline double arrival_rate(double window, double queue, double connections,
                           const NetworkParams& params) {
  return connections * window / rtt(queue, params);
}

}  // namespace aqmsim

#endif  // AQMSIM_NETWORK_HPP_
