// Copyright 2026 The Authors.
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

#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "robsub/domains.hpp"

namespace robsub {

using Json = nlohmann::json;

// Experiment runner configuration. `params` is the config document itself;
// each experiment reads its own keys (see README).
struct RunConfig {
  std::string experiment;  // icm-sim | equator-bench | dosim-run | arisen-bench | rascal-bench
  std::string instance_id = "instance";
  std::uint64_t seed = 0;
  Json params;
  std::filesystem::path base_dir;  // relative instance paths resolve here
  std::filesystem::path out_dir = ".";
  bool timing = true;         // false writes NA for every wall time
  bool cap_override = false;  // lift enumeration caps

  void validate() const;
};

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out_dir;
  bool no_timing = false;
  bool cap_override = false;
};

// Parses a config file. The seed is mandatory unless the overrides carry one.
RunConfig load_run_config(const std::filesystem::path& path, const RunOverrides& overrides = {});
RunConfig parse_run_config(const std::string& text, const std::filesystem::path& base_dir,
                           const RunOverrides& overrides = {});

struct PhaseTime {
  std::string name;
  double wall_time_ms = 0.0;
};

struct OutputDigest {
  std::string file;  // relative to out_dir
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct RunManifest {
  Json config;
  std::string version;
  std::vector<PhaseTime> phases;
  std::vector<OutputDigest> outputs;

  Json to_json(bool timing) const;
};

// Runs the experiment, writes its CSV file(s) and manifest.json into out_dir.
RunManifest run_experiment(const RunConfig& cfg);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

// RFC 4180 field quoting and shortest round-trip number formatting.
std::string csv_field(const std::string& s);
std::string format_number(double v);

// One row of the algorithm comparison table.
struct CompareRow {
  std::string instance_id;
  std::string algorithm;  // equator | double_oracle | greedy
  int n = 0;
  int k = 0;
  int m = 0;
  double worst_case_value = 0.0;
  double greedy_value = 0.0;  // nominal greedy set on the uniform member average
  double wall_time_ms = 0.0;
  std::uint64_t seed = 0;
  std::string status = "ok";  // ok | timeout | max_iters | error: ...
};

struct CompareSettings {
  std::vector<std::string> algorithms{"equator", "double_oracle", "greedy"};
  EquatorConfig equator;
  DoubleOracleConfig double_oracle;
};

// EQUATOR, double oracle and nominal greedy on one budget-allocation problem
// with shared seeds. A failing algorithm yields a row with an error status.
std::vector<CompareRow> compare_algorithms(const BudgetProblem& problem,
                                           const std::string& instance_id,
                                           const CompareSettings& settings, std::uint64_t seed);

}  // namespace robsub
