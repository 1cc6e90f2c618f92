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

#ifndef AQMSIM_PSO_HPP_
#define AQMSIM_PSO_HPP_

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

namespace aqmsim {

// Deterministic 64-bit generator; cheap to reseed per particle per iteration
// so serial and parallel schedules draw identical streams.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  SplitMix64 mix(master ^ (a * 0x9E3779B97F4A7C15ULL) ^ (b + 0xD1B54A32D192ED03ULL));
  mix.next();
  return mix.next();
}

struct Bounds {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t dimensions() const { return lower.size(); }

  void validate() const {
    if (lower.empty()) throw std::invalid_argument("pso: bounds are empty");
    if (lower.size() != upper.size())
      throw std::invalid_argument("pso: bound vectors differ in length");
    for (std::size_t d = 0; d < lower.size(); ++d)
      if (!(lower[d] < upper[d]))
        throw std::invalid_argument("pso: each lower bound must be < upper bound");
  }
};

struct SwarmConfig {
  int max_iterations = 300;
  int population = 20;
  double max_velocity = 4.0;
  double inertia_initial = 0.9;
  double inertia_final = 0.2;
  double accel_cognitive = 2.0;  // not reported by the source material; standard value
  double accel_social = 2.0;
  double min_error_gradient = 1e-5;
  // Iterations the gradient rule looks back over. Short windows stop the
  // swarm mid-flight (benchmark stalls reach ~45 iterations, and the decaying
  // inertia schedule only turns the swarm into a fine-grained local searcher
  // near the end of the budget); 250 matches the classic toolbox default.
  int gradient_window = 250;
  std::uint64_t seed = 1;
  int threads = 1;

  void validate() const {
    if (population < 2) throw std::invalid_argument("pso: population must be >= 2");
    if (max_iterations < 1) throw std::invalid_argument("pso: max_iterations must be >= 1");
    if (!(max_velocity > 0.0)) throw std::invalid_argument("pso: max_velocity must be > 0");
    if (!(inertia_initial >= inertia_final && inertia_final > 0.0))
      throw std::invalid_argument("pso: need inertia_initial >= inertia_final > 0");
    if (accel_cognitive < 0.0 || accel_social < 0.0)
      throw std::invalid_argument("pso: acceleration constants must be >= 0");
    if (gradient_window < 1) throw std::invalid_argument("pso: gradient_window must be >= 1");
    if (min_error_gradient < 0.0)
      throw std::invalid_argument("pso: min_error_gradient must be >= 0");
  }
};

struct Particle {
  std::vector<double> position;
  std::vector<double> velocity;
  std::vector<double> best_position;
  double best_score = std::numeric_limits<double>::infinity();
};

struct TuneReport {
  std::vector<double> best_position;
  double best_score = std::numeric_limits<double>::infinity();
  std::vector<double> convergence;  // best score after each iteration, non-increasing
  int iterations_used = 0;
  std::uint64_t seed = 0;
};

// v <- inertia * v + a1 * g1 .* (P - x) + a2 * g2 .* (G - x), componentwise
// fresh uniforms, then clamped to +-max_velocity.
template <typename UniformSource>
void velocity_update(Particle& particle, const std::vector<double>& global_best,
                     double inertia, double accel_cognitive, double accel_social,
                     double max_velocity, UniformSource&& uniform) {
  for (std::size_t d = 0; d < particle.position.size(); ++d) {
    const double cognitive = uniform() * (particle.best_position[d] - particle.position[d]);
    const double social = uniform() * (global_best[d] - particle.position[d]);
    double v = inertia * particle.velocity[d] + accel_cognitive * cognitive +
               accel_social * social;
    v = std::clamp(v, -max_velocity, max_velocity);
    particle.velocity[d] = v;
  }
}

// x <- x + v, reflected back into the box; each bounce flips the offending
// velocity component so search energy is preserved.
inline void position_update(Particle& particle, const Bounds& bounds) {
  for (std::size_t d = 0; d < particle.position.size(); ++d) {
    double x = particle.position[d] + particle.velocity[d];
    while (x < bounds.lower[d] || x > bounds.upper[d]) {
      if (x > bounds.upper[d])
        x = 2.0 * bounds.upper[d] - x;
      else
        x = 2.0 * bounds.lower[d] - x;
      particle.velocity[d] = -particle.velocity[d];
    }
    particle.position[d] = x;
  }
}

using Objective = std::function<double(const std::vector<double>&)>;

namespace detail {

// Evaluates every particle; failures score +inf so the swarm keeps moving.
inline void evaluate_swarm(const Objective& objective, const std::vector<Particle>& swarm,
                           std::vector<double>& scores, int threads) {
  const auto evaluate_range = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < swarm.size(); i += stride) {
      double score;
      try {
        score = objective(swarm[i].position);
      } catch (...) {
        score = std::numeric_limits<double>::infinity();
      }
      scores[i] = score;
    }
  };

  const auto workers = static_cast<std::size_t>(std::clamp(
      threads, 1, static_cast<int>(swarm.size())));
  if (workers <= 1) {
    evaluate_range(0, 1);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back(evaluate_range, w, workers);
  for (auto& t : pool) t.join();
}

}  // namespace detail

// Full swarm loop: uniform initialization in the box, linearly decaying
// inertia, personal/global best tracking, and the small-improvement stop rule
// over a trailing iteration window. Deterministic for a fixed seed, with or
// without threads.
inline TuneReport minimize(const Objective& objective, const Bounds& bounds,
                           const SwarmConfig& config) {
  config.validate();
  bounds.validate();
  const std::size_t dims = bounds.dimensions();
  const auto population = static_cast<std::size_t>(config.population);

  std::vector<Particle> swarm(population);
  for (std::size_t i = 0; i < population; ++i) {
    SplitMix64 rng(derive_seed(config.seed, 0, i));
    auto& p = swarm[i];
    p.position.resize(dims);
    p.velocity.resize(dims);
    for (std::size_t d = 0; d < dims; ++d)
      p.position[d] = bounds.lower[d] + rng.uniform() * (bounds.upper[d] - bounds.lower[d]);
    for (std::size_t d = 0; d < dims; ++d)
      p.velocity[d] = (rng.uniform() - 0.5) * config.max_velocity;
    p.best_position = p.position;
  }

  TuneReport report;
  report.seed = config.seed;
  std::vector<double> scores(population);
  std::vector<double> global_best_position;
  double global_best = std::numeric_limits<double>::infinity();

  const auto absorb_scores = [&]() {
    for (std::size_t i = 0; i < population; ++i) {
      if (scores[i] < swarm[i].best_score) {
        swarm[i].best_score = scores[i];
        swarm[i].best_position = swarm[i].position;
      }
      if (scores[i] < global_best) {
        global_best = scores[i];
        global_best_position = swarm[i].position;
      }
    }
  };

  const auto inertia_at = [&](int iteration) {
    if (config.max_iterations == 1) return config.inertia_initial;
    const double frac = static_cast<double>(iteration - 1) /
                        static_cast<double>(config.max_iterations - 1);
    return config.inertia_initial +
           (config.inertia_final - config.inertia_initial) * frac;
  };

  // Iteration 1 scores the initial population; moves begin at iteration 2.
  detail::evaluate_swarm(objective, swarm, scores, config.threads);
  absorb_scores();
  report.convergence.push_back(global_best);
  report.iterations_used = 1;

  for (int iteration = 2; iteration <= config.max_iterations; ++iteration) {
    const double inertia = inertia_at(iteration);
    for (std::size_t i = 0; i < population; ++i) {
      SplitMix64 rng(derive_seed(config.seed, static_cast<std::uint64_t>(iteration), i));
      velocity_update(swarm[i], global_best_position, inertia, config.accel_cognitive,
                      config.accel_social, config.max_velocity,
                      [&rng] { return rng.uniform(); });
      position_update(swarm[i], bounds);
    }
    detail::evaluate_swarm(objective, swarm, scores, config.threads);
    absorb_scores();
    report.convergence.push_back(global_best);
    report.iterations_used = iteration;

    const auto window = static_cast<std::size_t>(config.gradient_window);
    if (report.convergence.size() > window) {
      const double improvement =
          report.convergence[report.convergence.size() - 1 - window] -
          report.convergence.back();
      if (improvement < config.min_error_gradient) break;
    }
  }

  report.best_position = global_best_position;
  report.best_score = global_best;
  return report;
}

}  // namespace aqmsim

#endif  // AQMSIM_PSO_HPP_
