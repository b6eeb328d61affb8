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

#include "ajac/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>

#include "json.hpp"

#include "ajac/errors.hpp"

namespace ajac {
namespace {

void put_row(std::ostream& os, std::initializer_list<double> values) {
  bool first = true;
  for (const double v : values) {
    if (!first) os << ',';
    os << format_double(v);
    first = false;
  }
  os << '\n';
}

std::ofstream open(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

nlohmann::json number_or_null(double x) {
  return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string_view to_string(Termination termination) {
  switch (termination) {
    case Termination::kCompleted: return "completed";
    case Termination::kSingularity: return "singularity";
    case Termination::kDivergence: return "divergence";
  }
  return "unknown";
}

void write_log_csv(std::ostream& os, const SimLog& log) {
  os << "t,q1,q2,dq1,dq2,x1,x2,xd1,xd2,ex1,ex2,s1,s2,tau1,tau2,ak1,ak2,ak3,ad1,ad2,ad3,ad4,V1,"
        "cond_Jhat\n";
  for (const auto& r : log.rows) {
    put_row(os, {r.t, r.q(0), r.q(1), r.dq(0), r.dq(1), r.x(0), r.x(1), r.x_d(0), r.x_d(1),
                 r.position_error(0), r.position_error(1), r.s(0), r.s(1), r.tau(0), r.tau(1),
                 r.a_k_hat(0), r.a_k_hat(1), r.a_k_hat(2), r.a_d_hat(0), r.a_d_hat(1),
                 r.a_d_hat(2), r.a_d_hat(3), r.v1, r.jhat_condition});
  }
}

void write_lyapunov_csv(std::ostream& os, const SimLog& log) {
  os << "t,V1,V2_state,dissipation,V2_increment,residual,int_s2\n";
  for (const auto& r : log.rows) {
    put_row(os, {r.t, r.v1, r.v2_state, r.dissipation, r.v2_increment, r.residual,
                 r.s_squared_integral});
  }
}

void write_tracking_error_dat(std::ostream& os, const SimLog& log) {
  os << "# t ex1 ex2\n";
  for (const auto& r : log.rows) {
    os << format_double(r.t) << ' ' << format_double(r.position_error(0)) << ' '
       << format_double(r.position_error(1)) << '\n';
  }
}

void write_joint_torque_dat(std::ostream& os, const SimLog& log) {
  os << "# t tau1 tau2\n";
  for (const auto& r : log.rows) {
    os << format_double(r.t) << ' ' << format_double(r.tau(0)) << ' ' << format_double(r.tau(1))
       << '\n';
  }
}

std::string metrics_json(const SimLog& log, const RunMetrics& m) {
  nlohmann::ordered_json j;
  j["mode"] = std::string(to_string(log.mode));
  j["termination"] = std::string(to_string(log.termination));
  j["message"] = log.message;
  j["ticks"] = log.rows.size();
  j["steady_state_error"] = number_or_null(m.max_err_after);
  j["final_error"] = number_or_null(m.final_error);
  j["settling_time"] = number_or_null(m.settling_time);
  j["settling_time_axis1"] = number_or_null(m.axis_settling[0]);
  j["settling_time_axis2"] = number_or_null(m.axis_settling[1]);
  j["fitted_decay_rate"] = number_or_null(m.fitted_decay_rate);
  j["max_torque"] = number_or_null(m.max_torque);
  j["v1_max_uptick"] = m.v1_max_uptick ? number_or_null(*m.v1_max_uptick) : nullptr;
  j["v2_max_uptick"] = m.v2_max_uptick ? number_or_null(*m.v2_max_uptick) : nullptr;
  j["closed_loop_max_residual"] = number_or_null(m.closed_loop_max_residual);
  j["s_squared_integral"] = number_or_null(m.s_squared_integral);
  j["max_jhat_condition"] = number_or_null(m.max_jhat_condition);
  return j.dump(2) + "\n";
}

void write_run_artifacts(const std::filesystem::path& dir, const ResolvedConfig& config,
                         const SimLog& log, const RunMetrics& metrics) {
  std::filesystem::create_directories(dir);
  {
    auto out = open(dir / "log.csv");
    write_log_csv(out, log);
  }
  {
    auto out = open(dir / "lyapunov.csv");
    write_lyapunov_csv(out, log);
  }
  {
    auto out = open(dir / "tracking_error.dat");
    write_tracking_error_dat(out, log);
  }
  {
    auto out = open(dir / "joint_torque.dat");
    write_joint_torque_dat(out, log);
  }
  {
    auto out = open(dir / "metrics.json");
    out << metrics_json(log, metrics);
  }
  {
    auto out = open(dir / "config.cfg");
    out << to_config_text(config);
  }
}

void write_comparison_text(std::ostream& os, const std::vector<ComparisonRow>& rows) {
  auto cell = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%12.5g", v);
    return std::string(buf);
  };
  os << std::left << std::setw(24) << "config" << std::setw(20) << "mode" << std::setw(12)
     << "status" << std::right << std::setw(12) << "ss_err" << std::setw(12) << "settle"
     << std::setw(12) << "settle_ax1" << std::setw(12) << "settle_ax2" << std::setw(12)
     << "decay" << std::setw(12) << "max_tau" << std::setw(12) << "v1_uptick" << '\n';
  for (const auto& r : rows) {
    os << std::left << std::setw(24) << r.name << std::setw(20) << to_string(r.mode)
       << std::setw(12) << to_string(r.termination) << std::right << cell(r.metrics.max_err_after)
       << cell(r.metrics.settling_time) << cell(r.metrics.axis_settling[0])
       << cell(r.metrics.axis_settling[1]) << cell(r.metrics.fitted_decay_rate)
       << cell(r.metrics.max_torque) << cell(r.metrics.v1_max_uptick.value_or(NAN)) << '\n';
  }
}

void write_comparison_csv(std::ostream& os, const std::vector<ComparisonRow>& rows) {
  os << "config,mode,termination,steady_state_error,settling_time,settling_time_axis1,"
        "settling_time_axis2,fitted_decay_rate,max_torque,v1_max_uptick,v2_max_uptick,"
        "s_squared_integral\n";
  for (const auto& r : rows) {
    const auto& m = r.metrics;
    os << r.name << ',' << to_string(r.mode) << ',' << to_string(r.termination) << ','
       << format_double(m.max_err_after) << ',' << format_double(m.settling_time) << ','
       << format_double(m.axis_settling[0]) << ',' << format_double(m.axis_settling[1]) << ','
       << format_double(m.fitted_decay_rate) << ',' << format_double(m.max_torque) << ','
       << (m.v1_max_uptick ? format_double(*m.v1_max_uptick) : std::string("nan")) << ','
       << (m.v2_max_uptick ? format_double(*m.v2_max_uptick) : std::string("nan")) << ','
       << format_double(m.s_squared_integral) << '\n';
  }
}

}  // namespace ajac
