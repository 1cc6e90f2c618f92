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

#ifndef AQMSIM_DELAY_LINE_HPP_
#define AQMSIM_DELAY_LINE_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace aqmsim {

// Uniformly sampled history of a fixed set of channels, kept just long enough
// to answer lookups at t - R(t). Node k holds the channel values and time
// derivatives at t = k * dt; queries between nodes use cubic Hermite
// interpolation (piecewise-linear history would cap the integrator at second
// order). Nodes at negative times form a constant pre-history; the caller
// pushes node 0 and one node per step after that.
//
// Queries older than the retention horizon or ahead of the newest node are
// errors.
template <std::size_t Channels>
class DelayLine {
 public:
  using Sample = std::array<double, Channels>;

  DelayLine(double dt, double horizon, const Sample& pre_history)
      : dt_(dt), inv_dt_(1.0 / dt), pre_values_(pre_history) {
    if (!(dt > 0.0)) throw std::invalid_argument("delay line: dt must be > 0");
    if (!(horizon > 0.0)) throw std::invalid_argument("delay line: horizon must be > 0");
    pre_nodes_ = static_cast<std::int64_t>(std::ceil(horizon / dt)) + 2;
    std::size_t capacity = 8;  // power of two keeps slot lookup a mask
    while (capacity < static_cast<std::size_t>(pre_nodes_) + 4) capacity *= 2;
    ring_.resize(capacity);
    mask_ = static_cast<std::int64_t>(capacity) - 1;
    Node pre{pre_history, Sample{}};  // zero slopes: constant past
    for (auto& node : ring_) node = pre;
    newest_ = -1;  // pre-history occupies ids [-pre_nodes_, -1]
  }

  double dt() const { return dt_; }
  double latest_time() const { return static_cast<double>(newest_) * dt_; }

  // Appends the node at latest_time() + dt.
  void push(const Sample& values, const Sample& slopes) {
    ++newest_;
    slot(newest_) = Node{values, slopes};
  }

  // Rewrites one channel of the newest node (slope untouched). Used when a
  // controller tick lands on the node that was just pushed.
  void set_latest(std::size_t channel, double value) {
    slot(newest_).values[channel] = value;
  }

  Sample at(double t) const {
    const double x = t * inv_dt_;
    auto id = static_cast<std::int64_t>(std::floor(x));
    double s = x - static_cast<double>(id);
    // Snap to the grid so queries at node times are exact.
    if (s < 1e-9) {
      s = 0.0;
    } else if (s > 1.0 - 1e-9) {
      ++id;
      s = 0.0;
    }
    if (id > newest_ || (id == newest_ && s > 0.0))
      throw std::runtime_error("delay line: query ahead of newest sample");
    if (id < newest_ - horizon_steps())
      throw std::runtime_error("delay line: query older than horizon");
    // Constant past: everything strictly before t = 0 is the pre-history
    // value. The initial instant itself belongs to node 0 — the derivative
    // may jump there, and interpolating across that kink with node 0's
    // right-side slope would poison the segment.
    if (id < 0) return pre_values_;
    const Node& a = slot(id);
    if (s == 0.0) return a.values;
    const Node& b = slot(id + 1);
    Sample out;
    const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
    const double h10 = s * (1.0 - s) * (1.0 - s);
    const double h01 = s * s * (3.0 - 2.0 * s);
    const double h11 = s * s * (s - 1.0);
    for (std::size_t c = 0; c < Channels; ++c) {
      out[c] = h00 * a.values[c] + h10 * dt_ * a.slopes[c] +
               h01 * b.values[c] + h11 * dt_ * b.slopes[c];
    }
    return out;
  }

 private:
  struct Node {
    Sample values;
    Sample slopes;
  };

  // Lookback limit in nodes; one step tighter than the ring's physical
  // retention, so a passing horizon check never reads an overwritten slot.
  std::int64_t horizon_steps() const { return pre_nodes_ - 2; }

  // Two's-complement & with a pow2 mask is id mod capacity, negatives included.
  Node& slot(std::int64_t id) { return ring_[static_cast<std::size_t>(id & mask_)]; }
  const Node& slot(std::int64_t id) const {
    return ring_[static_cast<std::size_t>(id & mask_)];
  }

  double dt_;
  double inv_dt_;
  Sample pre_values_;
  std::int64_t pre_nodes_ = 0;
  std::int64_t newest_ = -1;
  std::int64_t mask_ = 0;
  std::vector<Node> ring_;
};

}  // namespace aqmsim

#endif  // AQMSIM_DELAY_LINE_HPP_
