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

#include "lap/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "lap/error.hpp"
#include "lap/trace_io.hpp"

namespace lap {

namespace {

using json = nlohmann::json;

// Strict view of a JSON object: typed getters that report the field path, and
// a final check that rejects unknown keys.
class Fields {
 public:
  Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_, "must be an object");
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string& key) {
    used_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }
  const json& raw(const std::string& key) {
    if (!has(key)) throw ConfigError(at(key), "is required");
    return j_.at(key);
  }

  double number(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) throw ConfigError(at(key), "must be a number");
    return v.get<double>();
  }
  double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  std::uint64_t count(const std::string& key) {
    const json& v = raw(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
    throw ConfigError(at(key), "must be a non-negative integer");
  }
  std::uint64_t count(const std::string& key, std::uint64_t fallback) { return has(key) ? count(key) : fallback; }

  bool flag(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean()) throw ConfigError(at(key), "must be true or false");
    return v.get<bool>();
  }

  std::string text(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) throw ConfigError(at(key), "must be a string");
    return v.get<std::string>();
  }
  std::string text(const std::string& key, const std::string& fallback) { return has(key) ? text(key) : fallback; }

  Vector vector(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_array()) throw ConfigError(at(key), "must be an array of numbers");
    Vector out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) throw ConfigError(at(key) + "[" + std::to_string(i) + "]", "must be a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key())) throw ConfigError(at(it.key()), "unknown field");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

// "name" or {"type": "name", ...}
std::string tagged_type(const json& j, const std::string& path) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_object() && j.contains("type") && j.at("type").is_string()) return j.at("type").get<std::string>();
  throw ConfigError(path, "must be a name or an object with a \"type\"");
}

StepRule parse_step_rule(const json& j, const std::string& path) {
  const std::string type = tagged_type(j, path);
  StepRule rule;
  if (type == "thm1") rule.kind = StepRule::Kind::kThm1;
  else if (type == "thm1_tight") rule.kind = StepRule::Kind::kThm1Tight;
  else if (type == "thm2") rule.kind = StepRule::Kind::kThm2;
  else if (type == "inv_sqrt") rule.kind = StepRule::Kind::kInvSqrt;
  else if (type == "constant") rule.kind = StepRule::Kind::kConstant;
  else throw ConfigError(path + ".type", "unknown step rule '" + type + "'");
  if (j.is_object()) {
    Fields f(j, path);
    f.has("type");
    const bool takes_alpha0 = rule.kind == StepRule::Kind::kInvSqrt || rule.kind == StepRule::Kind::kConstant;
    if (takes_alpha0) rule.alpha0 = f.number("alpha0");
    f.finish();
  } else if (rule.kind == StepRule::Kind::kInvSqrt || rule.kind == StepRule::Kind::kConstant) {
    throw ConfigError(path + ".alpha0", "is required");
  }
  return rule;
}

BetaRule parse_beta_rule(const json& j, const std::string& path) {
  const std::string type = tagged_type(j, path);
  BetaRule rule;
  if (type == "fixed") rule.kind = BetaRule::Kind::kFixed;
  else if (type == "thm2_bound") rule.kind = BetaRule::Kind::kThm2Bound;
  else if (type == "brent_search") rule.kind = BetaRule::Kind::kBrentSearch;
  else throw ConfigError(path + ".type", "unknown beta rule '" + type + "'");
  if (!j.is_object()) {
    if (rule.kind == BetaRule::Kind::kFixed) throw ConfigError(path + ".beta", "is required");
    return rule;
  }
  Fields f(j, path);
  f.has("type");
  if (rule.kind == BetaRule::Kind::kFixed) rule.beta = f.number("beta");
  if (rule.kind == BetaRule::Kind::kBrentSearch) {
    const std::string interval = f.text("interval", "unit");
    if (interval == "unit") rule.interval = BetaInterval::kUnit;
    else if (interval == "tail") rule.interval = BetaInterval::kTail;
    else throw ConfigError(f.at("interval"), "must be \"unit\" or \"tail\"");
    rule.brent_tol = f.number("tol", rule.brent_tol);
    rule.brent_max_evals = f.count("max_evals", rule.brent_max_evals);
  }
  f.finish();
  return rule;
}

ScheduleSpec parse_schedule(const json& j, const std::string& path) {
  Fields f(j, path);
  ScheduleSpec s;
  if (f.has("step_rule")) s.step_rule = parse_step_rule(f.raw("step_rule"), f.at("step_rule"));
  if (f.has("beta_rule")) s.beta_rule = parse_beta_rule(f.raw("beta_rule"), f.at("beta_rule"));
  s.sigma_T = f.number("sigma_T", s.sigma_T);
  s.constants.c1 = f.number("c1", s.constants.c1);
  s.constants.c2 = f.number("c2", s.constants.c2);
  s.constants.c3 = f.number("c3", s.constants.c3);
  if (f.has("delta0")) s.delta0 = f.number("delta0");
  s.mu0 = f.number("mu0", s.mu0);
  if (f.has("delta_decay")) {
    Fields d(f.raw("delta_decay"), f.at("delta_decay"));
    s.delta_decay.exponent = d.number("exponent", s.delta_decay.exponent);
    d.finish();
  }
  f.finish();
  return s;
}

FeasibleSet parse_feasible_set(const json& j, const std::string& path) {
  const std::string type = tagged_type(j, path);
  if (type == "whole_space") {
    if (j.is_object()) {
      Fields f(j, path);
      f.has("type");
      f.finish();
    }
    return FeasibleSet::whole_space();
  }
  if (!j.is_object()) throw ConfigError(path, "box and ball need parameters");
  Fields f(j, path);
  f.has("type");
  try {
    if (type == "box") {
      Vector lower = f.vector("lower");
      Vector upper = f.vector("upper");
      f.finish();
      return FeasibleSet::box(std::move(lower), std::move(upper));
    }
    if (type == "ball") {
      Vector center = f.vector("center");
      const double radius = f.number("radius");
      f.finish();
      return FeasibleSet::ball(std::move(center), radius);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
  throw ConfigError(path + ".type", "unknown feasible set '" + type + "'");
}

RunConfig parse_run(const json& j, std::size_t n, const std::string& path) {
  Fields f(j, path);
  RunConfig cfg;
  cfg.name = f.text("name", cfg.name);
  if (cfg.name.empty() || cfg.name.find_first_of("/\\ ") != std::string::npos)
    throw ConfigError(f.at("name"), "must be non-empty without spaces or path separators");
  try {
    cfg.algorithm = algorithm_from_string(f.text("algorithm", "lap"));
  } catch (const ConfigError& e) {
    throw ConfigError(f.at("algorithm"), e.what());
  }
  cfg.T = f.count("T");
  if (f.has("x0")) cfg.x0 = f.vector("x0");
  if (f.has("feasible_set")) cfg.feasible_set = parse_feasible_set(f.raw("feasible_set"), f.at("feasible_set"));
  if (f.has("projection")) {
    try {
      cfg.projection = projection_metric_from_string(f.text("projection"));
    } catch (const Error& e) {
      throw ConfigError(f.at("projection"), e.what());
    }
  }
  if (f.has("schedule")) cfg.schedule = parse_schedule(f.raw("schedule"), f.at("schedule"));
  if (f.has("gradient_noise")) {
    Fields g(f.raw("gradient_noise"), f.at("gradient_noise"));
    try {
      cfg.gradient_noise.kind = gradient_noise_kind_from_string(g.text("type", "none"));
    } catch (const Error& e) {
      throw ConfigError(g.at("type"), e.what());
    }
    cfg.gradient_noise.sigma_g = g.number("sigma_g", 0.0);
    g.finish();
  }
  if (f.has("hessian_noise")) {
    Fields h(f.raw("hessian_noise"), f.at("hessian_noise"));
    cfg.hessian_noise.sigma_h = h.number("sigma_h", cfg.hessian_noise.sigma_h);
    cfg.hessian_noise.floor_mu = h.number("floor_mu", cfg.hessian_noise.floor_mu);
    h.finish();
  }
  cfg.seed = f.count("seed", 0);
  cfg.record_diagnostics = f.flag("record_diagnostics", false);
  cfg.record_wall_time = f.flag("record_wall_time", false);
  const std::string source = f.text("grad_norm_source", "exact");
  if (source != "exact" && source != "sampled") throw ConfigError(f.at("grad_norm_source"), "must be exact or sampled");
  cfg.exact_grad_norm = source == "exact";
  f.finish();
  cfg.validate(n, path);
  return cfg;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError("<document>", std::string("invalid JSON: ") + e.what());
  }
}

json step_rule_json(const StepRule& r) {
  json j = {{"type", to_string(r.kind)}};
  if (r.kind == StepRule::Kind::kInvSqrt || r.kind == StepRule::Kind::kConstant) j["alpha0"] = r.alpha0;
  return j;
}

json beta_rule_json(const BetaRule& r) {
  json j = {{"type", to_string(r.kind)}};
  if (r.kind == BetaRule::Kind::kFixed) j["beta"] = r.beta;
  if (r.kind == BetaRule::Kind::kBrentSearch) {
    j["interval"] = to_string(r.interval);
    j["tol"] = r.brent_tol;
    j["max_evals"] = r.brent_max_evals;
  }
  return j;
}

json feasible_set_json(const FeasibleSet& q) {
  json j = {{"type", to_string(q.kind())}};
  if (q.kind() == FeasibleSet::Kind::kBox) {
    j["lower"] = q.lower();
    j["upper"] = q.upper();
  } else if (q.kind() == FeasibleSet::Kind::kBall) {
    j["center"] = q.center();
    j["radius"] = q.radius();
  }
  return j;
}

json run_json(const RunConfig& c, std::size_t n) {
  const ScheduleSpec& s = c.schedule;
  json schedule = {{"step_rule", step_rule_json(s.step_rule)},
                   {"beta_rule", beta_rule_json(s.beta_rule)},
                   {"sigma_T", s.sigma_T},
                   {"c1", s.constants.c1},
                   {"c2", s.constants.c2},
                   {"c3", s.constants.c3},
                   {"delta0", s.resolved_delta0(c.hessian_noise.sigma_h)},
                   {"mu0", s.mu0},
                   {"delta_decay", {{"exponent", s.delta_decay.exponent}}}};
  return json{{"name", c.name},
              {"algorithm", to_string(c.algorithm)},
              {"T", c.T},
              {"x0", c.x0.empty() ? Vector(n, 0.0) : c.x0},
              {"feasible_set", feasible_set_json(c.feasible_set)},
              {"projection", to_string(c.projection)},
              {"schedule", schedule},
              {"gradient_noise", {{"type", to_string(c.gradient_noise.kind)}, {"sigma_g", c.gradient_noise.sigma_g}}},
              {"hessian_noise", {{"sigma_h", c.hessian_noise.sigma_h}, {"floor_mu", c.hessian_noise.floor_mu}}},
              {"seed", c.seed},
              {"record_diagnostics", c.record_diagnostics},
              {"record_wall_time", c.record_wall_time},
              {"grad_norm_source", c.exact_grad_norm ? "exact" : "sampled"}};
}

std::string resolved_output_dir(const ExperimentConfig& cfg, const ExperimentOptions& options) {
  return options.output_dir.empty() ? cfg.output_dir : options.output_dir;
}

json config_json(const ExperimentConfig& cfg, const ExperimentOptions& options) {
  json problem;
  if (cfg.problem.kind == ProblemSpec::Kind::kQuadratic)
    problem = {{"type", "quadratic"}, {"n", cfg.problem.n}, {"seed", cfg.problem.seed}};
  else
    problem = {{"type", "file"}, {"path", cfg.problem.file}};
  json runs = json::array();
  for (const auto& r : cfg.runs) runs.push_back(run_json(r, cfg.problem.n));
  json j = {{"problem", problem},
            {"repeats", cfg.repeats},
            {"output_dir", resolved_output_dir(cfg, options)},
            {"seed_offset", options.seed_offset},
            {"runs", runs}};
  if (!cfg.grid.empty()) j["grid"] = cfg.grid;
  return j;
}

// Finite values as numbers, the rest as null.
json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json numbers(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number_or_null(x));
  return a;
}

struct Job {
  std::size_t run_index = 0;
  std::uint64_t seed = 0;
};

// Executes jobs on a bounded pool; results land in job order.
std::vector<SeedResult> execute(const QuadraticProblem& problem, const std::vector<RunConfig>& runs,
                                const std::vector<Job>& jobs, unsigned workers, const std::string& csv_dir,
                                bool keep_traces) {
  std::vector<SeedResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const QuadraticObjective obj(problem);

  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        RunConfig cfg = runs[jobs[i].run_index];
        cfg.seed = jobs[i].seed;
        SeedResult& out = results[i];
        out.run_name = cfg.name;
        out.seed = cfg.seed;
        out.trace = run(obj, cfg);
        if (!out.trace.rows.empty()) {
          Rng rng = make_rng(cfg.seed, 2);
          out.output_index = sample_output(out.trace, rng).t;
        }
        if (!csv_dir.empty()) {
          std::ostringstream csv;
          write_trace_csv(out.trace, csv);
          out.csv_path = (std::filesystem::path(csv_dir) / (cfg.name + "_seed" + std::to_string(cfg.seed) + ".csv"))
                             .string();
          write_file_atomic(out.csv_path, csv.str());
        }
        if (!keep_traces) {
          out.trace.iterates.clear();
          out.trace.iterates.shrink_to_fit();
          out.trace.gradients.clear();
          out.trace.gradients.shrink_to_fit();
          out.trace.preconditioners.clear();
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(jobs.size());
      }
    }
  };

  const unsigned n_threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(jobs.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

std::vector<Job> make_jobs(const ExperimentConfig& cfg, const ExperimentOptions& options) {
  std::vector<Job> jobs;
  for (std::size_t r = 0; r < cfg.runs.size(); ++r)
    for (std::size_t k = 0; k < cfg.repeats; ++k) jobs.push_back(Job{r, cfg.runs[r].seed + options.seed_offset + k});
  return jobs;
}

double final_gap(const Trace& trace) {
  if (trace.rows.empty() || !trace.rows.back().f_gap) return std::numeric_limits<double>::quiet_NaN();
  return *trace.rows.back().f_gap;
}

}  // namespace

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  if (values.size() % 2 == 1) return values[m];
  return 0.5 * (values[m - 1] + values[m]);
}

RunConfig parse_run_config(const std::string& json_text, std::size_t n, const std::string& path) {
  return parse_run(parse_json(json_text), n, path);
}

ExperimentConfig parse_experiment_config(const std::string& json_text, const std::string& base_dir) {
  const json doc = parse_json(json_text);
  Fields f(doc, "");
  ExperimentConfig cfg;

  Fields p(f.raw("problem"), "problem");
  const std::string type = p.text("type", "quadratic");
  if (type == "quadratic") {
    cfg.problem.kind = ProblemSpec::Kind::kQuadratic;
    cfg.problem.n = p.count("n");
    if (cfg.problem.n < 1) throw ConfigError("problem.n", "must be at least 1");
    cfg.problem.seed = p.count("seed", 0);
  } else if (type == "file") {
    cfg.problem.kind = ProblemSpec::Kind::kFile;
    std::filesystem::path file(p.text("path"));
    if (file.is_relative() && !base_dir.empty()) file = std::filesystem::path(base_dir) / file;
    cfg.problem.file = file.string();
    cfg.problem.n = load_problem(cfg.problem).n;
  } else {
    throw ConfigError("problem.type", "must be quadratic or file");
  }
  p.finish();

  cfg.repeats = f.count("repeats", 1);
  if (cfg.repeats < 1) throw ConfigError("repeats", "must be at least 1");
  cfg.output_dir = f.text("output_dir", cfg.output_dir);
  if (f.has("grid")) {
    cfg.grid = f.vector("grid");
    for (std::size_t i = 0; i < cfg.grid.size(); ++i)
      if (!(cfg.grid[i] > 0.0)) throw ConfigError("grid[" + std::to_string(i) + "]", "must be positive");
  }
  const json& runs = f.raw("runs");
  if (!runs.is_array()) throw ConfigError("runs", "must be a list");
  if (runs.empty()) throw ConfigError("runs", "must contain at least one run");
  std::set<std::string> names;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const std::string path = "runs[" + std::to_string(i) + "]";
    cfg.runs.push_back(parse_run(runs[i], cfg.problem.n, path));
    if (!names.insert(cfg.runs.back().name).second) throw ConfigError(path + ".name", "duplicate run name");
  }
  f.finish();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error& e) {
    throw ConfigError("<file>", e.what());
  }
  return parse_experiment_config(text, std::filesystem::path(path).parent_path().string());
}

QuadraticProblem load_problem(const ProblemSpec& spec) {
  if (spec.kind == ProblemSpec::Kind::kQuadratic) return make_quadratic(spec.n, spec.seed);
  try {
    return load_quadratic(spec.file);
  } catch (const ConfigError& e) {
    throw ConfigError("problem.path", e.what());
  } catch (const Error& e) {
    throw ConfigError("problem.path", e.what());
  }
}

std::string describe_experiment(const ExperimentConfig& cfg, const ExperimentOptions& options) {
  return config_json(cfg, options).dump(2) + "\n";
}

std::string run_config_to_json(const RunConfig& cfg) {
  return run_json(cfg, cfg.x0.size()).dump(2);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const ExperimentOptions& options, bool keep_traces) {
  const QuadraticProblem problem = load_problem(cfg.problem);
  const std::string out_dir = resolved_output_dir(cfg, options);
  const std::vector<Job> jobs = make_jobs(cfg, options);

  ExperimentResult result;
  result.results = execute(problem, cfg.runs, jobs, options.jobs, out_dir, keep_traces);

  json runs = json::array();
  for (std::size_t r = 0; r < cfg.runs.size(); ++r) {
    json seeds = json::array(), status = json::array(), failures = json::array(), csv = json::array();
    std::vector<double> gaps, grads, bs, rs, outs, weighted, walls;
    for (const auto& sr : result.results) {
      if (sr.run_name != cfg.runs[r].name) continue;
      const Trace& t = sr.trace;
      seeds.push_back(sr.seed);
      status.push_back(to_string(t.status));
      csv.push_back(std::filesystem::path(sr.csv_path).filename().string());
      if (t.status == RunStatus::kScheduleFailure) result.any_schedule_failure = true;
      if (t.status != RunStatus::kCompleted)
        failures.push_back({{"seed", sr.seed}, {"status", to_string(t.status)},
                            {"iteration", t.failure_iteration.value_or(0)}, {"message", t.failure_message}});
      gaps.push_back(final_gap(t));
      grads.push_back(t.rows.empty() ? std::numeric_limits<double>::quiet_NaN() : t.rows.back().grad_norm2);
      bs.push_back(t.b_running);
      rs.push_back(t.r_value.value_or(std::numeric_limits<double>::quiet_NaN()));
      outs.push_back(t.rows.empty() || !t.rows[sr.output_index].f_gap ? std::numeric_limits<double>::quiet_NaN()
                                                                      : *t.rows[sr.output_index].f_gap);
      double num = 0.0, den = 0.0;
      for (const auto& row : t.rows) {
        num += row.alpha * row.grad_dual_norm_p * row.grad_dual_norm_p;
        den += row.alpha;
      }
      weighted.push_back(den > 0.0 ? num / den : std::numeric_limits<double>::quiet_NaN());
      walls.push_back(static_cast<double>(t.wall_ns_total));
    }
    json output_indices = json::array();
    for (const auto& sr : result.results)
      if (sr.run_name == cfg.runs[r].name) output_indices.push_back(sr.output_index);
    runs.push_back({{"name", cfg.runs[r].name},
                    {"algorithm", to_string(cfg.runs[r].algorithm)},
                    {"grad_norm_source", cfg.runs[r].exact_grad_norm ? "exact" : "sampled"},
                    {"seeds", seeds},
                    {"status", status},
                    {"failures", failures},
                    {"csv", csv},
                    {"final_f_gap", numbers(gaps)},
                    {"median_final_f_gap", number_or_null(median(gaps))},
                    {"final_grad_norm2", numbers(grads)},
                    {"median_final_grad_norm2", number_or_null(median(grads))},
                    {"B", numbers(bs)},
                    {"R", numbers(rs)},
                    {"output_index", output_indices},
                    {"output_f_gap", numbers(outs)},
                    {"weighted_sq_dual_grad", numbers(weighted)},
                    {"wall_ns", numbers(walls)},
                    {"median_wall_ns", number_or_null(median(walls))}});
  }
  json summary = {{"format", "lap-summary-v1"},
                  {"config", config_json(cfg, options)},
                  {"problem", {{"n", problem.n}, {"seed", problem.seed}, {"f_star", problem.f_star}}},
                  {"runs", runs}};
  result.summary_json = summary.dump(2) + "\n";
  result.summary_path = (std::filesystem::path(out_dir) / "summary.json").string();
  write_file_atomic(result.summary_path, result.summary_json);
  return result;
}

GridResult grid_search_alpha0(const ExperimentConfig& cfg, const std::vector<double>& candidates,
                              const ExperimentOptions& options) {
  if (candidates.empty()) throw ConfigError("grid", "needs at least one candidate");
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (!(candidates[i] > 0.0)) throw ConfigError("grid[" + std::to_string(i) + "]", "must be positive");
  std::vector<double> sorted = candidates;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  const QuadraticProblem problem = load_problem(cfg.problem);
  std::vector<RunConfig> variants;
  std::vector<std::pair<std::size_t, double>> origin;  // (run index, α_0)
  for (std::size_t r = 0; r < cfg.runs.size(); ++r) {
    const auto kind = cfg.runs[r].schedule.step_rule.kind;
    if (kind != StepRule::Kind::kInvSqrt && kind != StepRule::Kind::kConstant) continue;
    for (double a : sorted) {
      RunConfig v = cfg.runs[r];
      v.schedule.step_rule.alpha0 = a;
      v.name = cfg.runs[r].name + "@" + format_double(a);
      variants.push_back(std::move(v));
      origin.emplace_back(r, a);
    }
  }
  if (variants.empty()) throw ConfigError("runs", "no run has an inv_sqrt or constant step rule to tune");

  std::vector<Job> jobs;
  for (std::size_t v = 0; v < variants.size(); ++v)
    for (std::size_t k = 0; k < cfg.repeats; ++k) jobs.push_back(Job{v, variants[v].seed + options.seed_offset + k});
  const auto results = execute(problem, variants, jobs, options.jobs, "", false);

  GridResult out;
  for (std::size_t v = 0; v < variants.size(); ++v) {
    GridEntry e;
    e.run_name = cfg.runs[origin[v].first].name;
    e.alpha0 = origin[v].second;
    std::vector<double> gaps;
    for (std::size_t j = 0; j < jobs.size(); ++j) {
      if (jobs[j].run_index != v) continue;
      const Trace& t = results[j].trace;
      if (t.status == RunStatus::kScheduleFailure) out.any_schedule_failure = true;
      if (t.status != RunStatus::kCompleted) ++e.failed_seeds;
      const double g = final_gap(t);
      gaps.push_back(t.status == RunStatus::kCompleted && std::isfinite(g) ? g
                                                                           : std::numeric_limits<double>::infinity());
    }
    e.median_final_f_gap = median(gaps);
    out.table.push_back(e);
  }

  json best = json::object();
  for (std::size_t r = 0; r < cfg.runs.size(); ++r) {
    const GridEntry* winner = nullptr;
    for (const auto& e : out.table) {
      if (e.run_name != cfg.runs[r].name) continue;
      // Candidates are visited in increasing α_0, so strict < keeps the smaller on ties.
      if (!winner || e.median_final_f_gap < winner->median_final_f_gap) winner = &e;
    }
    if (winner) {
      out.best.emplace_back(winner->run_name, winner->alpha0);
      best[winner->run_name] = winner->alpha0;
    }
  }

  json table = json::array();
  std::ostringstream csv;
  csv << "run,alpha0,median_final_f_gap,failed_seeds\n";
  for (const auto& e : out.table) {
    table.push_back({{"run", e.run_name}, {"alpha0", e.alpha0},
                     {"median_final_f_gap", number_or_null(e.median_final_f_gap)}, {"failed_seeds", e.failed_seeds}});
    csv << e.run_name << ',' << format_double(e.alpha0) << ',' << format_double(e.median_final_f_gap) << ','
        << e.failed_seeds << '\n';
  }
  json doc = {{"format", "lap-grid-v1"},
              {"config", config_json(cfg, options)},
              {"candidates", sorted},
              {"table", table},
              {"best", best}};
  out.grid_json = doc.dump(2) + "\n";
  const std::string dir = resolved_output_dir(cfg, options);
  write_file_atomic((std::filesystem::path(dir) / "grid.json").string(), out.grid_json);
  write_file_atomic((std::filesystem::path(dir) / "grid.csv").string(), csv.str());
  return out;
}

}  // namespace lap
