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

// Command-line front end. Talks to the library only through lap.h.

#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "lap/lap.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSchedule = 3;

int exit_code(lap_status status) {
  switch (status) {
    case LAP_OK: return kExitOk;
    case LAP_CONFIG_ERROR: return kExitConfig;
    case LAP_SCHEDULE_FAILURE: return kExitSchedule;
    default: return kExitFailure;
  }
}

int report_error(lap_status status) {
  std::fprintf(stderr, "lap: %s: %s\n", lap_status_string(status), lap_last_error());
  return exit_code(status);
}

std::string cell(const nlohmann::json& v) {
  if (v.is_number()) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v.get<double>());
    return buf;
  }
  return "-";
}

void print_summary(const std::string& text) {
  const auto doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.contains("runs")) {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::printf("%-16s %-10s %6s %18s %18s %8s\n", "run", "algorithm", "seeds", "median f-f*", "median |grad f|",
              "failed");
  for (const auto& r : doc["runs"]) {
    std::printf("%-16s %-10s %6zu %18s %18s %8zu\n", r["name"].get<std::string>().c_str(),
                r["algorithm"].get<std::string>().c_str(), r["seeds"].size(), cell(r["median_final_f_gap"]).c_str(),
                cell(r["median_final_grad_norm2"]).c_str(), r["failures"].size());
    for (const auto& f : r["failures"])
      std::fprintf(stderr, "  %s seed %s stopped at t=%s (%s): %s\n", r["name"].get<std::string>().c_str(),
                   f["seed"].dump().c_str(), f["iteration"].dump().c_str(), f["status"].get<std::string>().c_str(),
                   f["message"].get<std::string>().c_str());
  }
}

void print_grid(const std::string& text) {
  const auto doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.contains("table")) {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::printf("%-16s %12s %18s %8s\n", "run", "alpha0", "median f-f*", "failed");
  for (const auto& e : doc["table"])
    std::printf("%-16s %12s %18s %8s\n", e["run"].get<std::string>().c_str(), cell(e["alpha0"]).c_str(),
                cell(e["median_final_f_gap"]).c_str(), e["failed_seeds"].dump().c_str());
  for (const auto& [name, a] : doc["best"].items()) std::printf("best %s: alpha0 = %s\n", name.c_str(), cell(a).c_str());
}

void print_report(const char* line, int /*passed*/, int /*expect_pass*/, void* /*user*/) { std::printf("%s\n", line); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic gradient descent with linear averaged preconditioning"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(lap_version()));

  std::uint64_t seed_offset = 0;
  unsigned jobs = 1;
  std::string output_dir;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed-offset", seed_offset, "Added to every run seed");
    sub->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--output-dir", output_dir, "Overrides the config's output_dir");
  };

  std::string config;
  auto* run = app.add_subcommand("run", "Run every (run, seed) pair and write CSV traces plus summary.json");
  run->add_option("config", config, "Experiment config (JSON)")->required();
  add_common(run);

  auto* grid = app.add_subcommand("grid", "Grid search over alpha0 using the config's grid list");
  grid->add_option("config", config, "Experiment config (JSON)")->required();
  add_common(grid);

  auto* describe = app.add_subcommand("describe", "Print the resolved config with all defaults");
  describe->add_option("config", config, "Experiment config (JSON)")->required();
  add_common(describe);

  std::size_t trials = 10000;
  std::uint64_t verify_seed = 0;
  auto* verify = app.add_subcommand("verify", "Run the randomized property suite");
  verify->add_option("--trials", trials, "Trials per property")->check(CLI::PositiveNumber);
  verify->add_option("--seed", verify_seed, "Suite seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version exit 0; malformed command lines count as config errors.
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  lap_experiment_options options{seed_offset, jobs, output_dir.empty() ? nullptr : output_dir.c_str()};

  if (*verify) {
    int ok = 0;
    const lap_status status = lap_verify_run(trials, verify_seed, print_report, nullptr, &ok);
    if (status != LAP_OK) return report_error(status);
    std::printf("%s\n", ok ? "all properties as expected" : "some properties NOT as expected");
    return ok ? kExitOk : kExitFailure;
  }

  char* out = nullptr;
  lap_status status = LAP_OK;
  if (*run) status = lap_experiment_run(config.c_str(), &options, &out);
  else if (*grid) status = lap_experiment_grid(config.c_str(), &options, &out);
  else status = lap_experiment_describe(config.c_str(), &options, &out);

  if (out) {
    if (*run) print_summary(out);
    else if (*grid) print_grid(out);
    else std::fputs(out, stdout);
    lap_string_free(out);
  }
  if (status != LAP_OK) return report_error(status);
  return kExitOk;
}
