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

#ifndef AQMSIM_CSV_HPP_
#define AQMSIM_CSV_HPP_

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "aqmsim/metrics.hpp"
#include "aqmsim/pso.hpp"
#include "aqmsim/scenarios.hpp"

namespace aqmsim {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// 12 significant digits, C locale, no trailing noise; enough to round-trip
// the plotted quantities and stable across reruns.
inline std::string format_number(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

namespace detail {
inline std::ofstream open_csv(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

inline void finish_csv(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}
}  // namespace detail

inline void write_trace_csv(const std::string& path, const Trace& trace) {
  auto out = detail::open_csv(path);
  out << "time,queue,window,control,arrival_rate\n";
  for (const auto& s : trace) {
    out << format_number(s.time) << ',' << format_number(s.queue) << ','
        << format_number(s.window) << ',' << format_number(s.control) << ','
        << format_number(s.arrival) << '\n';
  }
  detail::finish_csv(out, path);
}

inline void write_metrics_csv(const std::string& path, const RunResult& result) {
  auto out = detail::open_csv(path);
  out << "iae,utilization,loss_rate\n";
  out << format_number(result.iae) << ',' << format_number(result.utilization) << ','
      << format_number(result.loss_rate) << '\n';
  detail::finish_csv(out, path);
}

inline void write_convergence_csv(const std::string& path, const TuneReport& report) {
  auto out = detail::open_csv(path);
  out << "iteration,best_iae\n";
  for (std::size_t i = 0; i < report.convergence.size(); ++i)
    out << (i + 1) << ',' << format_number(report.convergence[i]) << '\n';
  detail::finish_csv(out, path);
}

inline void write_best_csv(const std::string& path,
                           const std::vector<std::string>& names,
                           const std::vector<double>& values) {
  if (names.size() != values.size())
    throw std::invalid_argument("best.csv: names and values differ in length");
  auto out = detail::open_csv(path);
  out << "parameter,value\n";
  for (std::size_t i = 0; i < names.size(); ++i)
    out << names[i] << ',' << format_number(values[i]) << '\n';
  detail::finish_csv(out, path);
}

struct SweepRow {
  double axis_value = 0.0;
  std::string controller;
  double utilization = 0.0;
  double loss_rate = 0.0;
};

inline void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
  auto out = detail::open_csv(path);
  out << "axis_value,controller,utilization,loss_rate\n";
  for (const auto& row : rows) {
    out << format_number(row.axis_value) << ',' << row.controller << ','
        << format_number(row.utilization) << ',' << format_number(row.loss_rate) << '\n';
  }
  detail::finish_csv(out, path);
}

inline void write_compare_csv(const std::string& path,
                              const std::vector<MatrixCell>& cells) {
  auto out = detail::open_csv(path);
  out << "controller,iae,utilization,loss_rate\n";
  for (const auto& cell : cells) {
    out << cell.controller << ',';
    if (cell.result) {
      out << format_number(cell.result->iae) << ','
          << format_number(cell.result->utilization) << ','
          << format_number(cell.result->loss_rate) << '\n';
    } else {
      out << "nan,nan,nan\n";
    }
  }
  detail::finish_csv(out, path);
}

}  // namespace aqmsim

#endif  // AQMSIM_CSV_HPP_
