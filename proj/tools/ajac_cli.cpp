// Copyright 2026 The ajac Authors
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

// ajac: run, compare and sweep closed-loop experiments from config files,
// and run the model property suite.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ajac/analysis.hpp"
#include "ajac/config.hpp"
#include "ajac/errors.hpp"
#include "ajac/properties.hpp"
#include "ajac/report.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSingularity = 3;
constexpr int kExitDivergence = 4;

int exit_code(ajac::Termination t) {
  switch (t) {
    case ajac::Termination::kCompleted: return kExitOk;
    case ajac::Termination::kSingularity: return kExitSingularity;
    case ajac::Termination::kDivergence: return kExitDivergence;
  }
  return kExitOther;
}

struct Job {
  std::string name;
  ajac::ResolvedConfig config;
};

struct Outcome {
  Job job;
  ajac::SimLog log;
  ajac::RunMetrics metrics;
};

Outcome execute(const Job& job) {
  Outcome out{job, ajac::run_experiment(job.config.experiment), {}};
  out.metrics = ajac::compute_metrics(out.log, job.config.metrics);
  return out;
}

std::vector<Outcome> execute_all(const std::vector<Job>& jobs) {
  std::vector<std::future<Outcome>> futures;
  futures.reserve(jobs.size());
  for (const auto& job : jobs) futures.push_back(std::async(std::launch::async, execute, job));
  std::vector<Outcome> out;
  for (auto& f : futures) out.push_back(f.get());
  return out;
}

void print_summary(const Outcome& o) {
  const auto& m = o.metrics;
  std::printf("%s: %s, %zu ticks\n", o.job.name.c_str(),
              std::string(ajac::to_string(o.log.termination)).c_str(), o.log.rows.size());
  if (!o.log.message.empty()) std::printf("  %s\n", o.log.message.c_str());
  std::printf("  steady-state error  %.6g m\n", m.max_err_after);
  std::printf("  settling time       %.6g s (axes %.6g, %.6g)\n", m.settling_time,
              m.axis_settling[0], m.axis_settling[1]);
  std::printf("  fitted decay rate   %.6g 1/s\n", m.fitted_decay_rate);
  std::printf("  max torque          %.6g N m\n", m.max_torque);
  if (m.v1_max_uptick) std::printf("  V1 max uptick       %.3g\n", *m.v1_max_uptick);
  if (m.v2_max_uptick) std::printf("  V2 max uptick       %.3g\n", *m.v2_max_uptick);
  std::printf("  int |s|^2 dt        %.6g\n", m.s_squared_integral);
}

int worst_exit(const std::vector<Outcome>& outcomes) {
  for (const auto& o : outcomes) {
    if (!o.log.completed()) return exit_code(o.log.termination);
  }
  return kExitOk;
}

void write_table(const fs::path& out_dir, const std::vector<Outcome>& outcomes, bool quiet) {
  std::vector<ajac::ComparisonRow> rows;
  for (const auto& o : outcomes) {
    rows.push_back({o.job.name, o.log.mode, o.log.termination, o.metrics});
  }
  if (!quiet) ajac::write_comparison_text(std::cout, rows);
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    std::ofstream csv(out_dir / "comparison.csv", std::ios::binary);
    ajac::write_comparison_csv(csv, rows);
    for (const auto& o : outcomes) {
      ajac::write_run_artifacts(out_dir / o.job.name, o.job.config, o.log, o.metrics);
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive Jacobian tracking control experiments"};
  app.require_subcommand(1);

  std::vector<std::string> configs;
  std::vector<std::string> overrides;
  std::string out_dir;
  bool quiet = false;
  bool same_gains = false;
  std::string sweep_key;
  std::vector<std::string> sweep_values;
  int samples = 1000;

  auto common = [&](CLI::App* sub, bool many) {
    auto* opt = sub->add_option("--config", configs, "config file")->required();
    if (!many) opt->expected(1);
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--set", overrides, "override, key=value (repeatable)");
    sub->add_flag("--quiet", quiet, "suppress the summary");
  };

  auto* run = app.add_subcommand("run", "run one experiment and write its artifacts");
  common(run, false);
  auto* compare = app.add_subcommand("compare", "run several configs on the same trajectory");
  common(compare, true);
  compare->add_flag("--same-gains", same_gains, "require identical gains across configs");
  auto* sweep = app.add_subcommand("sweep", "run one config over a list of values for one key");
  common(sweep, false);
  sweep->add_option("--key", sweep_key, "config key to sweep")->required();
  sweep->add_option("--values", sweep_values, "values")->required()->delimiter(',');
  auto* validate = app.add_subcommand("validate", "run the model property suite");
  validate->add_option("--samples", samples, "random samples per property");
  validate->add_flag("--quiet", quiet, "print failures only");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      Job job{fs::path(configs.front()).stem().string(), ajac::load_config(configs.front(), overrides)};
      const Outcome o = execute(job);
      if (!out_dir.empty()) ajac::write_run_artifacts(out_dir, o.job.config, o.log, o.metrics);
      if (!quiet) print_summary(o);
      return exit_code(o.log.termination);
    }

    if (compare->parsed()) {
      if (configs.size() < 2) throw ajac::ConfigError("compare needs at least two configs");
      std::vector<Job> jobs;
      for (const auto& path : configs) {
        jobs.push_back({fs::path(path).stem().string(), ajac::load_config(path, overrides)});
      }
      const auto& ref = jobs.front().config.experiment;
      for (const auto& job : jobs) {
        const auto& e = job.config.experiment;
        if (!(e.trajectory == ref.trajectory) || e.t_end != ref.t_end) {
          throw ajac::ConfigError(job.name + ": trajectory differs from " + jobs.front().name);
        }
        if (same_gains && (e.gains.K != ref.gains.K || e.gains.alpha != ref.gains.alpha ||
                           e.gains.beta != ref.gains.beta || e.gains.gamma_d != ref.gains.gamma_d ||
                           e.gains.gamma_k != ref.gains.gamma_k)) {
          throw ajac::ConfigError(job.name + ": gains differ from " + jobs.front().name);
        }
      }
      const auto outcomes = execute_all(jobs);
      write_table(out_dir, outcomes, quiet);
      return worst_exit(outcomes);
    }

    if (sweep->parsed()) {
      if (!ajac::is_known_key(sweep_key)) throw ajac::ConfigError("unknown key '" + sweep_key + "'");
      std::vector<Job> jobs;
      for (const auto& v : sweep_values) {
        auto o = overrides;
        o.push_back(sweep_key + "=" + v);
        jobs.push_back({sweep_key + "=" + v, ajac::load_config(configs.front(), o)});
      }
      const auto outcomes = execute_all(jobs);
      write_table(out_dir, outcomes, quiet);
      return worst_exit(outcomes);
    }

    if (validate->parsed()) {
      ajac::PropertyOptions opts;
      opts.samples = samples;
      const auto results = ajac::run_property_suite(opts);
      for (const auto& r : results) {
        if (quiet && r.passed) continue;
        std::printf("%s  %-52s max %.3e  tol %.1e  n=%d\n", r.passed ? "PASS" : "FAIL",
                    r.name.c_str(), r.max_residual, r.tolerance, r.samples);
      }
      return ajac::all_passed(results) ? kExitOk : kExitOther;
    }
  } catch (const ajac::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitOther;
  }
  return kExitOther;
}
