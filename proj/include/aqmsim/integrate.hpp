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

#ifndef AQMSIM_INTEGRATE_HPP_
#define AQMSIM_INTEGRATE_HPP_

#include <array>
#include <cstddef>

namespace aqmsim {

// One classic fourth-order Runge-Kutta step. Delayed terms enter through the
// derivative callback, which reads whatever history it captured; stage times
// never look ahead of the current step, so history at or before t suffices
// as long as the delay exceeds the step size.
//
// `k1` may pass a precomputed derivative at (t, y) to avoid re-evaluating it.
template <std::size_t N, typename F>
std::array<double, N> rk4_step(F&& f, double t, const std::array<double, N>& y,
                               double dt, const std::array<double, N>* k1 = nullptr) {
  const std::array<double, N> d1 = k1 ? *k1 : f(t, y);
  std::array<double, N> ys;

  for (std::size_t i = 0; i < N; ++i) ys[i] = y[i] + 0.5 * dt * d1[i];
  const std::array<double, N> d2 = f(t + 0.5 * dt, ys);

  for (std::size_t i = 0; i < N; ++i) ys[i] = y[i] + 0.5 * dt * d2[i];
  const std::array<double, N> d3 = f(t + 0.5 * dt, ys);

  for (std::size_t i = 0; i < N; ++i) ys[i] = y[i] + dt * d3[i];
  const std::array<double, N> d4 = f(t + dt, ys);

  std::array<double, N> out;
  for (std::size_t i = 0; i < N; ++i)
    out[i] = y[i] + dt / 6.0 * (d1[i] + 2.0 * d2[i] + 2.0 * d3[i] + d4[i]);
  return out;
}

}  // namespace aqmsim

#endif  // AQMSIM_INTEGRATE_HPP_
