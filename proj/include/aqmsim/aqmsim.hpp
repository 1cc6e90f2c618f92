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

// Umbrella header: the whole TCP/AQM fluid simulation lab.

#ifndef AQMSIM_AQMSIM_HPP_
#define AQMSIM_AQMSIM_HPP_

#include "aqmsim/config.hpp"        // IWYU pragma: export
#include "aqmsim/controllers.hpp"   // IWYU pragma: export
#include "aqmsim/csv.hpp"           // IWYU pragma: export
#include "aqmsim/delay_line.hpp"    // IWYU pragma: export
#include "aqmsim/fluid_model.hpp"   // IWYU pragma: export
#include "aqmsim/integrate.hpp"     // IWYU pragma: export
#include "aqmsim/metrics.hpp"       // IWYU pragma: export
#include "aqmsim/network.hpp"       // IWYU pragma: export
#include "aqmsim/pso.hpp"           // IWYU pragma: export
#include "aqmsim/scenarios.hpp"     // IWYU pragma: export
#include "aqmsim/simulate.hpp"      // IWYU pragma: export
#include "aqmsim/tuning.hpp"        // IWYU pragma: export

#endif  // AQMSIM_AQMSIM_HPP_
