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

// End-to-end checks of the command-line tool: exit codes, file schemas, and
// byte-level determinism.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

namespace fs = std::filesystem;

namespace {

const std::string kCli = AQMSIM_CLI_PATH;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("aqmsim_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int n = 0;
    return n;
  }
};

int run_cli(const std::string& args) {
  const std::string command = kCli + " " + args + " >/dev/null 2>/dev/null";
  const int status = std::system(command.c_str());
  return WEXITSTATUS(status);
}

std::string capture_cli(const std::string& args) {
  TempDir tmp;
  const auto file = tmp.path / "stdout.txt";
  const std::string command = kCli + " " + args + " >" + file.string() + " 2>/dev/null";
  const int status = std::system(command.c_str());
  REQUIRE(WEXITSTATUS(status) == 0);
  std::ifstream in(file);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream stream(text);
  std::string line;
  while (std::getline(stream, line)) lines.push_back(line);
  return lines;
}

const char* kShortRun = R"({
  "scenario": {"preset": "nominal", "duration": 2.0},
  "controller": "rbf"
})";

}  // namespace

TEST_CASE("run writes trace.csv and metrics.csv with the pinned schemas") {
  TempDir tmp;
  write_file(tmp.path / "config.json", kShortRun);
  const int code = run_cli("run --config " + (tmp.path / "config.json").string() +
                           " --out " + (tmp.path / "out").string());
  REQUIRE(code == 0);

  const auto trace = lines_of(read_file(tmp.path / "out" / "trace.csv"));
  REQUIRE(!trace.empty());
  CHECK(trace.front() == "time,queue,window,control,arrival_rate");
  // 2 s at the 1/160 s trace period: 320 intervals + header + initial row.
  CHECK(trace.size() == 322);

  const auto metrics = lines_of(read_file(tmp.path / "out" / "metrics.csv"));
  REQUIRE(metrics.size() == 2);
  CHECK(metrics.front() == "iae,utilization,loss_rate");
}

TEST_CASE("missing config file exits 2 and names the path") {
  TempDir tmp;
  const auto missing = (tmp.path / "nope.json").string();
  CHECK(run_cli("run --config " + missing) == 2);
}

TEST_CASE("malformed config and bad scheme exit 2") {
  TempDir tmp;
  write_file(tmp.path / "bad.json", "{ not json");
  CHECK(run_cli("run --config " + (tmp.path / "bad.json").string()) == 2);

  write_file(tmp.path / "scheme.json", R"({"controller": {"scheme": "red"}})");
  CHECK(run_cli("run --config " + (tmp.path / "scheme.json").string()) == 2);
}

TEST_CASE("identical seeds give byte-identical outputs") {
  TempDir tmp;
  write_file(tmp.path / "config.json", kShortRun);
  const auto config = (tmp.path / "config.json").string();
  REQUIRE(run_cli("run --config " + config + " --seed 7 --out " +
                  (tmp.path / "a").string()) == 0);
  REQUIRE(run_cli("run --config " + config + " --seed 7 --out " +
                  (tmp.path / "b").string()) == 0);
  CHECK(read_file(tmp.path / "a" / "trace.csv") ==
        read_file(tmp.path / "b" / "trace.csv"));
  CHECK(read_file(tmp.path / "a" / "metrics.csv") ==
        read_file(tmp.path / "b" / "metrics.csv"));
}

TEST_CASE("tune rejects non-tunable schemes and writes convergence and best") {
  TempDir tmp;
  write_file(tmp.path / "pi.json", R"({"controller": "pi"})");
  CHECK(run_cli("tune --config " + (tmp.path / "pi.json").string()) == 2);

  // A tiny swarm on a short horizon keeps this test cheap.
  write_file(tmp.path / "tune.json", R"({
    "scenario": {"preset": "nominal", "duration": 2.0},
    "controller": "rbf",
    "tune": {"max_iterations": 3, "population": 4, "initial_queues": [0, 150, 300]}
  })");
  REQUIRE(run_cli("tune --config " + (tmp.path / "tune.json").string() + " --out " +
                  (tmp.path / "out").string()) == 0);

  const auto convergence = lines_of(read_file(tmp.path / "out" / "convergence.csv"));
  REQUIRE(convergence.size() >= 2);
  CHECK(convergence.front() == "iteration,best_iae");
  CHECK(convergence.size() <= 4);  // header + at most three iterations
  double last = 1e300;
  for (std::size_t i = 1; i < convergence.size(); ++i) {
    const auto comma = convergence[i].find(',');
    const double value = std::stod(convergence[i].substr(comma + 1));
    CHECK(value <= last);
    last = value;
  }

  const auto best = lines_of(read_file(tmp.path / "out" / "best.csv"));
  REQUIRE(best.size() == 6);  // header + w1..w5
  CHECK(best.front() == "parameter,value");
  CHECK(best[1].substr(0, 3) == "w1,");
}

TEST_CASE("tuning an irbf emits six parameter rows") {
  TempDir tmp;
  write_file(tmp.path / "tune.json", R"({
    "scenario": {"preset": "nominal", "duration": 1.0},
    "controller": "irbf",
    "tune": {"max_iterations": 2, "population": 3, "initial_queues": [150]}
  })");
  REQUIRE(run_cli("tune --config " + (tmp.path / "tune.json").string() + " --out " +
                  (tmp.path / "out").string()) == 0);
  const auto best = lines_of(read_file(tmp.path / "out" / "best.csv"));
  REQUIRE(best.size() == 7);  // header + w1..w5 + w_I
  CHECK(best.back().substr(0, 4) == "w_I,");
}

TEST_CASE("population below two is rejected at parse time") {
  TempDir tmp;
  write_file(tmp.path / "tune.json", R"({
    "controller": "rbf",
    "tune": {"population": 1}
  })");
  CHECK(run_cli("tune --config " + (tmp.path / "tune.json").string()) == 2);
}

TEST_CASE("sweep: single-value axis degenerates to one run per controller") {
  TempDir tmp;
  write_file(tmp.path / "sweep.json", R"({
    "scenario": {"preset": "nominal", "duration": 1.0},
    "controllers": ["rbf", "pi"],
    "sweep": {"axis": "users", "values": [100]}
  })");
  REQUIRE(run_cli("sweep --config " + (tmp.path / "sweep.json").string() + " --out " +
                  (tmp.path / "out").string()) == 0);
  const auto rows = lines_of(read_file(tmp.path / "out" / "sweep.csv"));
  REQUIRE(rows.size() == 3);
  CHECK(rows.front() == "axis_value,controller,utilization,loss_rate");
  CHECK(rows[1].substr(0, 8) == "100,rbf,");
  CHECK(rows[2].substr(0, 7) == "100,pi,");
}

TEST_CASE("sweep with an explicitly empty controller list exits 2") {
  TempDir tmp;
  write_file(tmp.path / "sweep.json", R"({"controllers": []})");
  CHECK(run_cli("sweep --config " + (tmp.path / "sweep.json").string()) == 2);
}

TEST_CASE("compare emits one row per controller") {
  TempDir tmp;
  write_file(tmp.path / "compare.json", R"({
    "scenario": {"preset": "nominal", "duration": 1.0}
  })");
  REQUIRE(run_cli("compare --config " + (tmp.path / "compare.json").string() +
                  " --out " + (tmp.path / "out").string()) == 0);
  const auto rows = lines_of(read_file(tmp.path / "out" / "compare.csv"));
  REQUIRE(rows.size() == 7);  // header + six presets
  CHECK(rows.front() == "controller,iae,utilization,loss_rate");
  CHECK(rows[1].substr(0, 4) == "rbf,");
  CHECK(rows[6].substr(0, 9) == "droptail,");
}

TEST_CASE("dump-effective-config round-trips") {
  TempDir tmp;
  write_file(tmp.path / "config.json", kShortRun);
  const auto dumped = capture_cli("run --config " + (tmp.path / "config.json").string() +
                                  " --seed 11 --dump-effective-config");
  write_file(tmp.path / "effective.json", dumped);
  const auto dumped_again = capture_cli(
      "run --config " + (tmp.path / "effective.json").string() +
      " --dump-effective-config");
  CHECK(dumped == dumped_again);
}

TEST_CASE("unknown flags exit 2") {
  CHECK(run_cli("run --frobnicate") == 2);
  CHECK(run_cli("") == 2);  // a subcommand is required
}
