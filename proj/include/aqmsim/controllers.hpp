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

#ifndef AQMSIM_CONTROLLERS_HPP_
#define AQMSIM_CONTROLLERS_HPP_

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "aqmsim/network.hpp"

namespace aqmsim {

inline constexpr double kDefaultSamplePeriod = 1.0 / 160.0;  // PI period, Table 4

// Gaussian radial-basis control law: u = sum_i w_i * exp(-(e - c_i)^2 / s_i^2)
// on the queue error e = q - q_d.
struct RbfConfig {
  std::vector<double> weights;
  std::vector<double> centers;  // packets
  std::vector<double> spreads;  // packets
  double sample_period = kDefaultSamplePeriod;

  void validate() const {
    if (weights.empty()) throw std::invalid_argument("rbf: needs at least one basis");
    if (centers.size() != weights.size() || spreads.size() != weights.size())
      throw std::invalid_argument("rbf: weights/centers/spreads sizes differ");
    for (double s : spreads)
      if (!(s > 0.0)) throw std::invalid_argument("rbf: spreads must be > 0");
    for (double c : centers)
      if (!std::isfinite(c)) throw std::invalid_argument("rbf: centers must be finite");
    if (!(sample_period > 0.0))
      throw std::invalid_argument("rbf: sample_period must be > 0");
  }
};

// RBF law plus an error-integral term with gain w_I.
struct IrbfConfig {
  RbfConfig rbf;
  double integral_gain = 0.0;  // 1 / (packet * second)

  void validate() const {
    rbf.validate();
    if (!std::isfinite(integral_gain))
      throw std::invalid_argument("irbf: integral gain must be finite");
  }
};

// Incremental proportional-integral law: p(k) = p(k-1) + a e(k) - b e(k-1).
struct PiConfig {
  double gain_a = 1.822e-5;  // per packet
  double gain_b = 1.816e-5;  // per packet
  double sample_period = kDefaultSamplePeriod;

  void validate() const {
    if (!(sample_period > 0.0)) throw std::invalid_argument("pi: sample_period must be > 0");
    if (!std::isfinite(gain_a) || !std::isfinite(gain_b))
      throw std::invalid_argument("pi: gains must be finite");
  }
};

// Random exponential marking: a congestion price integrates queue and rate
// mismatch; marking probability is 1 - phi^(-price).
struct RemConfig {
  double gamma = 0.001;
  double phi = 1.001;
  double sample_period = kDefaultSamplePeriod;

  void validate() const {
    if (!(gamma > 0.0)) throw std::invalid_argument("rem: gamma must be > 0");
    if (!(phi > 1.0)) throw std::invalid_argument("rem: phi must be > 1");
    if (!(sample_period > 0.0)) throw std::invalid_argument("rem: sample_period must be > 0");
  }
};

// Adaptive RED in gentle mode. Zero queue_weight or sample_period means
// "derive from the link": w_g = 1 - exp(-1/C) and one packet time 1/C, the
// per-packet cadence the EWMA weight was designed for.
struct AredConfig {
  double min_threshold = 100.0;  // packets
  double max_threshold = 215.0;  // packets
  double queue_weight = 0.0;     // 0 => 1 - exp(-1/C)
  double max_p_initial = 0.1;
  double max_p_min = 0.01;
  double max_p_max = 0.5;
  double increment = 0.01;       // additive max_p step up
  double decrement = 0.9;        // multiplicative max_p step down
  double adaptation_interval = 0.5;  // seconds
  double sample_period = 0.0;    // 0 => 1/C

  void validate() const {
    if (!(min_threshold < max_threshold))
      throw std::invalid_argument("ared: min_threshold must be < max_threshold");
    if (!(min_threshold > 0.0)) throw std::invalid_argument("ared: min_threshold must be > 0");
    if (queue_weight < 0.0 || queue_weight > 1.0)
      throw std::invalid_argument("ared: queue_weight must lie in [0, 1]");
    if (!(max_p_min > 0.0 && max_p_min <= max_p_initial && max_p_initial <= max_p_max &&
          max_p_max <= 1.0))
      throw std::invalid_argument("ared: need 0 < max_p_min <= max_p_initial <= max_p_max <= 1");
    if (!(increment > 0.0) || !(decrement > 0.0 && decrement < 1.0))
      throw std::invalid_argument("ared: bad adaptation constants");
    if (!(adaptation_interval > 0.0))
      throw std::invalid_argument("ared: adaptation_interval must be > 0");
    if (sample_period < 0.0) throw std::invalid_argument("ared: sample_period must be >= 0");
  }
};

// Passive finite buffer: drop everything once the queue is full, nothing
// before.
struct DropTailConfig {
  double sample_period = 0.0;  // 0 => 1/C

  void validate() const {
    if (sample_period < 0.0)
      throw std::invalid_argument("droptail: sample_period must be >= 0");
  }
};

using ControllerConfig =
    std::variant<RbfConfig, IrbfConfig, PiConfig, RemConfig, AredConfig, DropTailConfig>;

inline void validate(const ControllerConfig& cfg) {
  std::visit([](const auto& c) { c.validate(); }, cfg);
}

inline std::string scheme_name(const ControllerConfig& cfg) {
  struct Namer {
    std::string operator()(const RbfConfig&) const { return "rbf"; }
    std::string operator()(const IrbfConfig&) const { return "irbf"; }
    std::string operator()(const PiConfig&) const { return "pi"; }
    std::string operator()(const RemConfig&) const { return "rem"; }
    std::string operator()(const AredConfig&) const { return "ared"; }
    std::string operator()(const DropTailConfig&) const { return "droptail"; }
  };
  return std::visit(Namer{}, cfg);
}

// --- Scheme laws -----------------------------------------------------------

// Raw (pre-saturation) RBF output for error e.
inline double rbf_eval(double error, const RbfConfig& cfg) {
  double sum = 0.0;
  for (std::size_t i = 0; i < cfg.weights.size(); ++i) {
    const double z = (error - cfg.centers[i]) / cfg.spreads[i];
    sum += cfg.weights[i] * std::exp(-z * z);
  }
  return sum;
}

// Raw IRBF output; the caller owns the integral accumulation.
inline double irbf_eval(double error, double error_integral, const IrbfConfig& cfg) {
  return rbf_eval(error, cfg.rbf) + cfg.integral_gain * error_integral;
}

struct PiState {
  double prev_error = 0.0;
  double prev_control = 0.0;
};

inline double pi_update(double queue, PiState& state, const PiConfig& cfg,
                        double target_queue) {
  const double error = queue - target_queue;
  const double control = saturate(state.prev_control + cfg.gain_a * error -
                                  cfg.gain_b * state.prev_error);
  state.prev_error = error;
  state.prev_control = control;
  return control;
}

struct RemState {
  double price = 0.0;
};

inline double rem_update(double queue, double arrival, RemState& state,
                         const RemConfig& cfg, const NetworkParams& params) {
  const double mismatch = (queue - params.target_queue) +
                          (arrival - params.capacity) * cfg.sample_period;
  state.price = std::max(0.0, state.price + cfg.gamma * mismatch);
  return saturate(1.0 - std::pow(cfg.phi, -state.price));
}

struct AredState {
  double avg_queue = 0.0;
  double max_p = 0.1;
  double next_adaptation = 0.0;
};

inline double ared_update(double queue, double now, AredState& state,
                          const AredConfig& cfg, double queue_weight) {
  state.avg_queue = (1.0 - queue_weight) * state.avg_queue + queue_weight * queue;

  if (now >= state.next_adaptation) {
    // Steer avg into the middle 20% of [min_th, max_th]: additive increase of
    // max_p above the band, multiplicative decrease below it.
    const double range = cfg.max_threshold - cfg.min_threshold;
    const double low = cfg.min_threshold + 0.4 * range;
    const double high = cfg.min_threshold + 0.6 * range;
    if (state.avg_queue > high && state.max_p < cfg.max_p_max)
      state.max_p = std::min(state.max_p + cfg.increment, cfg.max_p_max);
    else if (state.avg_queue < low && state.max_p > cfg.max_p_min)
      state.max_p = std::max(state.max_p * cfg.decrement, cfg.max_p_min);
    state.next_adaptation = now + cfg.adaptation_interval;
  }

  const double avg = state.avg_queue;
  if (avg < cfg.min_threshold) return 0.0;
  if (avg < cfg.max_threshold) {
    return saturate(state.max_p * (avg - cfg.min_threshold) /
                    (cfg.max_threshold - cfg.min_threshold));
  }
  if (avg < 2.0 * cfg.max_threshold) {
    // Gentle region: ramp from max_p to 1 between max_th and 2*max_th.
    return saturate(state.max_p + (1.0 - state.max_p) *
                                      (avg - cfg.max_threshold) / cfg.max_threshold);
  }
  return 1.0;
}

inline double droptail(double queue, double buffer_limit) {
  return queue >= buffer_limit ? 1.0 : 0.0;
}

// --- Uniform dispatch ------------------------------------------------------

// A controller bound to one link: resolved derived defaults plus the mutable
// per-run state. Observe the queue at each sampling instant, emit a saturated
// mark/drop probability.
class Controller {
 public:
  Controller(const ControllerConfig& config, const NetworkParams& params)
      : config_(config), params_(params) {
    aqmsim::validate(config_);
    params_.validate();
    if (const auto* ared = std::get_if<AredConfig>(&config_)) {
      queue_weight_ = ared->queue_weight > 0.0
                          ? ared->queue_weight
                          : 1.0 - std::exp(-1.0 / params_.capacity);
      sample_period_ = ared->sample_period > 0.0 ? ared->sample_period
                                                 : 1.0 / params_.capacity;
      ared_.max_p = ared->max_p_initial;
      ared_.next_adaptation = ared->adaptation_interval;
    } else if (const auto* tail = std::get_if<DropTailConfig>(&config_)) {
      sample_period_ = tail->sample_period > 0.0 ? tail->sample_period
                                                 : 1.0 / params_.capacity;
    } else {
      sample_period_ = std::visit([](const auto& c) { return period_of(c); }, config_);
    }
  }

  double sample_period() const { return sample_period_; }
  const ControllerConfig& config() const { return config_; }

  // Seeds state that depends on the initial observation (ARED's EWMA).
  void start(const SimState& initial) { ared_.avg_queue = initial.queue; }

  double tick(const SimState& observed, double arrival) {
    const double queue = observed.queue;
    const double error = queue - params_.target_queue;

    struct Dispatch {
      Controller* self;
      const SimState& observed;
      double arrival;
      double queue;
      double error;

      double operator()(const RbfConfig& cfg) const {
        return saturate(rbf_eval(error, cfg));
      }
      double operator()(const IrbfConfig& cfg) const {
        const double raw = irbf_eval(error, self->irbf_integral_, cfg);
        const double control = saturate(raw);
        // Anti-windup: the integral freezes while the output saturates.
        if (raw == control)
          self->irbf_integral_ += error * cfg.rbf.sample_period;
        return control;
      }
      double operator()(const PiConfig& cfg) const {
        return pi_update(queue, self->pi_, cfg, self->params_.target_queue);
      }
      double operator()(const RemConfig& cfg) const {
        return rem_update(queue, arrival, self->rem_, cfg, self->params_);
      }
      double operator()(const AredConfig& cfg) const {
        return ared_update(queue, observed.time, self->ared_, cfg, self->queue_weight_);
      }
      double operator()(const DropTailConfig&) const {
        return droptail(queue, self->params_.buffer_limit);
      }
    };
    return std::visit(Dispatch{this, observed, arrival, queue, error}, config_);
  }

 private:
  static double period_of(const RbfConfig& c) { return c.sample_period; }
  static double period_of(const IrbfConfig& c) { return c.rbf.sample_period; }
  static double period_of(const PiConfig& c) { return c.sample_period; }
  static double period_of(const RemConfig& c) { return c.sample_period; }
  static double period_of(const AredConfig& c) { return c.sample_period; }
  static double period_of(const DropTailConfig& c) { return c.sample_period; }

  ControllerConfig config_;
  NetworkParams params_;
  double sample_period_ = kDefaultSamplePeriod;
  double queue_weight_ = 0.0;

  PiState pi_;
  RemState rem_;
  AredState ared_;
  double irbf_integral_ = 0.0;
};

}  // namespace aqmsim

#endif  // AQMSIM_CONTROLLERS_HPP_
