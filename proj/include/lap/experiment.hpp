// Copyright 2026 The LAP Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Experiment configs (JSON), multi-seed execution, the α_0 grid search and
// the summary document.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lap/oracles.hpp"
#include "lap/optimizer.hpp"

namespace lap {

struct ProblemSpec {
  enum class Kind { kQuadratic, kFile };
  Kind kind = Kind::kQuadratic;
  std::size_t n = 10;
  std::uint64_t seed = 0;
  std::string file;  // resolved against the config's directory
};

struct ExperimentConfig {
  ProblemSpec problem;
  std::vector<RunConfig> runs;
  std::size_t repeats = 1;
  std::vector<double> grid;  // candidate α_0 values
  std::string output_dir = "out";
};

struct ExperimentOptions {
  std::uint64_t seed_offset = 0;
  unsigned jobs = 1;
  std::string output_dir;  // overrides the config when non-empty
};

// Errors carry the JSON path of the offending field (ConfigError::field()).
ExperimentConfig parse_experiment_config(const std::string& json_text, const std::string& base_dir = "");
ExperimentConfig load_experiment_config(const std::string& path);
// A single run object, as found in the "runs" list.
RunConfig parse_run_config(const std::string& json_text, std::size_t n, const std::string& path = "run");

QuadraticProblem load_problem(const ProblemSpec& spec);

// Fully resolved config, defaults included, as pretty JSON.
std::string describe_experiment(const ExperimentConfig& cfg, const ExperimentOptions& options = {});
std::string run_config_to_json(const RunConfig& cfg);

struct SeedResult {
  std::string run_name;
  std::uint64_t seed = 0;
  Trace trace;
  std::size_t output_index = 0;
  std::string csv_path;
};

struct ExperimentResult {
  std::string summary_json;
  std::string summary_path;
  std::vector<SeedResult> results;  // run-major, then seed order
  bool any_schedule_failure = false;
};

// One CSV per (run, seed) named <run>_seed<seed>.csv plus summary.json.
// keep_traces = false drops iterates from the returned results.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const ExperimentOptions& options = {},
                                bool keep_traces = false);

struct GridEntry {
  std::string run_name;
  double alpha0 = 0.0;
  double median_final_f_gap = 0.0;  // +inf when any seed failed or diverged
  std::size_t failed_seeds = 0;
};

struct GridResult {
  std::vector<GridEntry> table;
  std::vector<std::pair<std::string, double>> best;  // per run with an α_0 rule
  std::string grid_json;
  bool any_schedule_failure = false;
};

// Runs every candidate α_0 for every run with an inv_sqrt or constant step
// rule, over all seeds; picks the lowest median final f − f*, ties toward the
// smaller α_0. Writes grid.json and grid.csv to the output directory.
GridResult grid_search_alpha0(const ExperimentConfig& cfg, const std::vector<double>& candidates,
                              const ExperimentOptions& options = {});

double median(std::vector<double> values);

}  // namespace lap
