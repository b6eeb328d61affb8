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

// Acceptance run: one PASS/FAIL line per criterion at the documented
// tolerances. Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ajac/analysis.hpp"
#include "ajac/config.hpp"
#include "ajac/properties.hpp"
#include "ajac/report.hpp"

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

const fs::path kConfigs = AJAC_CONFIG_DIR;

struct Run {
  ajac::ResolvedConfig config;
  ajac::SimLog log;
  ajac::RunMetrics metrics;
};

Run run(const std::string& name, const std::vector<std::string>& overrides = {}) {
  Run r;
  r.config = ajac::load_config(kConfigs / (name + ".cfg"), overrides);
  r.log = ajac::run_experiment(r.config.experiment);
  r.metrics = ajac::compute_metrics(r.log, r.config.metrics);
  return r;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, const char* title, bool pass, const std::string& detail) {
  std::printf("%s  [%d] %s: %s\n", pass ? "PASS" : "FAIL", id, title, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void criterion_properties() {
  const auto t0 = Clock::now();
  const auto results = ajac::run_property_suite();
  const double elapsed = seconds_since(t0);
  std::ostringstream detail;
  bool pass = ajac::all_passed(results) && elapsed < 10.0;
  for (const auto& r : results) {
    if (r.name.find("regressor") != std::string::npos && r.samples < 1000) pass = false;
    detail << "\n        " << (r.passed ? "ok  " : "bad ") << r.name << " max=" << r.max_residual
           << " tol=" << r.tolerance << " n=" << r.samples;
  }
  report(1, "property suite", pass, fmt("%.2f s", elapsed) + detail.str());
}

void criterion_ce_rate() {
  const auto t0 = Clock::now();
  const Run ce = run("certainty_equivalence");
  const double elapsed = seconds_since(t0);
  const double rate = ce.metrics.fitted_decay_rate;
  const Run rest = run("certainty_equivalence", {"initial.dq0 = zero"});
  const Run constant = run("certainty_equivalence", {"controller.mode = ctrl1"});
  report(2, "certainty-equivalence decay rate", ce.log.completed() && rate >= 9.0 && elapsed < 30.0,
         fmt("rate %.4f 1/s (>= 9, min(lambda_c, alpha) = 10), %.2f s; from rest %.4f; "
             "constant K=30I %.4f",
             rate, elapsed, rest.metrics.fitted_decay_rate, constant.metrics.fitted_decay_rate));
}

void criteria_reference(const Run& c1, const Run& tr, const Run& c2, const Run& perf) {
  const double e1 = c1.metrics.max_err_after;
  const Run zoh = run("ctrl1", {"sim.sampling = zoh"});
  report(3, "Controller I steady-state error", c1.log.completed() && e1 <= 0.003,
         fmt("max|dx|inf over [6,10] s = %.6f m (<= 0.003); with held 5 ms samples %.6f m", e1,
             zoh.metrics.max_err_after));

  const double et = tr.metrics.max_err_after;
  report(4, "Controller I vs transpose baseline", c1.log.completed() && tr.log.completed() &&
                                                      e1 < et && e1 / et <= 0.6,
         fmt("%.6f vs %.6f m, ratio %.3f (<= 0.6)", e1, et, e1 / et));

  const auto& m2 = c2.metrics;
  const double initial = c2.log.rows.empty() ? 0.0 : c2.log.rows.front().position_error.norm();
  const bool converges = c2.log.completed() && m2.final_error < 0.1 * initial;
  report(5, "Controller II comparable to baseline",
         converges && m2.max_err_after <= 2.0 * et,
         fmt("%s, |dx| %.4f -> %.6f m, steady-state %.6f vs baseline %.6f m (ratio %.3f, <= 2)",
             std::string(ajac::to_string(c2.log.termination)).c_str(), initial, m2.final_error,
             m2.max_err_after, et, m2.max_err_after / et));

  auto axis_ratio = [](const ajac::RunMetrics& m) {
    const double a = m.axis_settling[0], b = m.axis_settling[1];
    return std::max(a, b) / std::min(a, b);
  };
  const double ri = axis_ratio(c1.metrics), rp = axis_ratio(perf.metrics);
  report(6, "estimated-inertia feedback settles faster and more uniformly",
         perf.log.completed() && perf.metrics.settling_time < c1.metrics.settling_time && rp < ri,
         fmt("settling %.3f s vs %.3f s; axis ratio %.3f vs %.3f", perf.metrics.settling_time,
             c1.metrics.settling_time, rp, ri));
}

void criterion_audits() {
  bool pass = true;
  std::ostringstream detail;
  for (const auto& entry : fs::directory_iterator(kConfigs)) {
    const std::string name = entry.path().stem().string();
    const Run r = run(name);
    const auto& m = r.metrics;
    pass = pass && r.log.completed();
    detail << "\n        " << name << ":";
    if (m.v1_max_uptick) {
      pass = pass && *m.v1_max_uptick <= 1e-6;
      detail << " V1 " << *m.v1_max_uptick;
    }
    if (m.v2_max_uptick) {
      pass = pass && *m.v2_max_uptick <= 1e-6;
      detail << (r.log.certificate == ajac::KinematicCertificate::kV2Star ? " V2* " : " V2 ")
             << *m.v2_max_uptick;
    }
  }
  report(7, "Lyapunov audits on bundled configs (max relative uptick <= 1e-6)", pass,
         detail.str());
}

void criterion_separation() {
  const Run demo = run("velocity_command_demo");
  std::vector<double> integrals;
  std::string gains;
  bool decreasing = true;
  for (const char* g : {"50", "200", "1000"}) {
    const Run r = run("velocity_command_demo", {std::string("sim.servo_gain = ") + g});
    const double v = r.metrics.s_squared_integral;
    if (!integrals.empty() && !(v < integrals.back())) decreasing = false;
    integrals.push_back(v);
    gains += fmt(" %s:%.5g", g, v);
  }
  const double e = demo.metrics.max_err_after;
  report(8, "velocity-command separation", demo.log.completed() && e < 0.01 && decreasing,
         fmt("servo 1000: %.6f m (< 0.01); int|s|^2 over gains", e) + gains);
}

void criterion_hygiene(const Run& c1) {
  const Run half = run("ctrl1", {"sim.dt_plant = 0.0005"});
  const double a = c1.metrics.max_err_after, b = half.metrics.max_err_after;
  const double change = std::abs(b - a) / a;
  std::ostringstream x, y;
  ajac::write_log_csv(x, c1.log);
  ajac::write_log_csv(y, ajac::run_experiment(c1.config.experiment));
  const bool identical = x.str() == y.str();
  report(9, "numerical hygiene", change < 0.02 && identical,
         fmt("halving dt_plant: %.8f -> %.8f m (%.4f%%, < 2%%); repeated run CSV %s", a, b,
             100 * change, identical ? "bit-identical" : "DIFFERS"));
}

}  // namespace

int main() {
  try {
    criterion_properties();
    criterion_ce_rate();
    const Run c1 = run("ctrl1");
    const Run tr = run("transpose_baseline");
    const Run c2 = run("ctrl2");
    const Run perf = run("ctrl1_performance");
    criteria_reference(c1, tr, c2, perf);
    criterion_audits();
    criterion_separation();
    criterion_hygiene(c1);
  } catch (const std::exception& e) {
    std::printf("FAIL  acceptance aborted: %s\n", e.what());
    return 1;
  }
  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
