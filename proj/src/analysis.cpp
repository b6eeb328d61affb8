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

#include "ajac/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace ajac {
namespace {

void require_rows(const SimLog& log) {
  if (log.rows.empty()) throw AnalysisError("log has no rows");
}

double inf_norm(const Eigen::Vector2d& v) { return v.cwiseAbs().maxCoeff(); }

// Time of the first row after which every value stays at or below threshold.
template <typename F>
double last_crossing_time(const SimLog& log, double threshold, F value) {
  for (std::size_t i = log.rows.size(); i-- > 0;) {
    if (value(log.rows[i]) > threshold) {
      if (i + 1 == log.rows.size()) return std::numeric_limits<double>::infinity();
      return log.rows[i + 1].t;
    }
  }
  return log.rows.front().t;
}

double max_relative_uptick(const std::vector<double>& v, double relative_floor,
                           double absolute_tolerance) {
  if (v.size() < 2) return 0.0;
  const double peak = *std::max_element(v.begin(), v.end());
  const double floor = std::max(relative_floor * std::abs(peak),
                                std::numeric_limits<double>::min());
  double worst = 0.0;
  for (std::size_t k = 1; k < v.size(); ++k) {
    const double rise = v[k] - v[k - 1];
    if (rise > absolute_tolerance) worst = std::max(worst, rise / std::max(std::abs(v[k - 1]), floor));
  }
  return worst;
}

}  // namespace

double steady_state_error(const SimLog& log, double t0) {
  require_rows(log);
  if (!(t0 < log.rows.back().t)) {
    throw AnalysisError("empty window: t0 = " + std::to_string(t0) + " is not before the last tick");
  }
  double worst = 0.0;
  for (const auto& row : log.rows) {
    if (row.t >= t0) worst = std::max(worst, inf_norm(row.position_error));
  }
  return worst;
}

double fit_decay_rate(const SimLog& log, double t_begin, double t_end) {
  require_rows(log);
  double n = 0, st = 0, sy = 0, stt = 0, sty = 0;
  for (const auto& row : log.rows) {
    if (row.t < t_begin || row.t > t_end) continue;
    const double e = row.position_error.norm();
    if (!(e > 0.0) || !std::isfinite(e)) {
      throw AnalysisError("degenerate fit: error trace touches zero at t = " +
                          std::to_string(row.t));
    }
    const double y = std::log(e);
    n += 1;
    st += row.t;
    sy += y;
    stt += row.t * row.t;
    sty += row.t * y;
  }
  const double denom = n * stt - st * st;
  if (n < 3 || !(denom > 0.0)) throw AnalysisError("degenerate fit: fewer than 3 samples");
  return -(n * sty - st * sy) / denom;
}

double fit_decay_rate(const SimLog& log, double fraction) {
  require_rows(log);
  const double e0 = log.rows.front().position_error.norm();
  double t_stop = log.rows.back().t;
  for (const auto& row : log.rows) {
    if (row.position_error.norm() < fraction * e0) {
      t_stop = row.t;
      break;
    }
  }
  return fit_decay_rate(log, log.rows.front().t, t_stop);
}

double settling_time(const SimLog& log, double fraction) {
  require_rows(log);
  const double threshold = fraction * inf_norm(log.rows.front().position_error);
  return last_crossing_time(log, threshold,
                            [](const LogRow& r) { return inf_norm(r.position_error); });
}

std::array<double, 2> axis_settling_times(const SimLog& log, double fraction) {
  require_rows(log);
  const double threshold = fraction * inf_norm(log.rows.front().position_error);
  std::array<double, 2> out{};
  for (int axis = 0; axis < 2; ++axis) {
    out[axis] = last_crossing_time(log, threshold, [axis](const LogRow& r) {
      return std::abs(r.position_error(axis));
    });
  }
  return out;
}

double max_torque(const SimLog& log) {
  double worst = 0.0;
  for (const auto& row : log.rows) worst = std::max(worst, row.tau.cwiseAbs().maxCoeff());
  return worst;
}

LyapunovAudit lyapunov_audit(const SimLog& log, double relative_floor,
                             double absolute_tolerance) {
  LyapunovAudit audit;
  if (produces_torque(log.mode)) {
    std::vector<double> v1;
    v1.reserve(log.rows.size());
    for (const auto& row : log.rows) v1.push_back(row.v1);
    audit.v1_max_uptick = max_relative_uptick(v1, relative_floor, absolute_tolerance);
  }

  if (log.certificate != KinematicCertificate::kNone && !log.rows.empty()) {
    // Adding the total dissipation as the constant makes the composite
    // nonnegative over the run and zero-referenced at the end.
    const double total = log.rows.back().dissipation;
    std::vector<double> v2;
    v2.reserve(log.rows.size());
    for (const auto& row : log.rows) {
      v2.push_back(row.v2_state + (total - row.dissipation) / (2.0 * log.alpha));
    }
    audit.v2_max_uptick = max_relative_uptick(v2, relative_floor, absolute_tolerance);
  }
  return audit;
}

double max_closed_loop_residual(const SimLog& log) {
  double worst = 0.0;
  for (const auto& row : log.rows) worst = std::max(worst, row.residual);
  return worst;
}

double s_squared_integral(const SimLog& log) {
  return log.rows.empty() ? 0.0 : log.rows.back().s_squared_integral;
}

RunMetrics compute_metrics(const SimLog& log, const MetricsOptions& options) {
  require_rows(log);
  RunMetrics m;
  m.max_err_after = log.rows.back().t > options.steady_state_from
                        ? steady_state_error(log, options.steady_state_from)
                        : std::numeric_limits<double>::quiet_NaN();
  m.settling_time = settling_time(log, options.settling_fraction);
  m.axis_settling = axis_settling_times(log, options.settling_fraction);
  try {
    m.fitted_decay_rate = fit_decay_rate(log, options.decay_fraction);
  } catch (const AnalysisError&) {
    m.fitted_decay_rate = std::numeric_limits<double>::quiet_NaN();
  }
  m.max_torque = max_torque(log);
  const LyapunovAudit audit = lyapunov_audit(log);
  m.v1_max_uptick = audit.v1_max_uptick;
  m.v2_max_uptick = audit.v2_max_uptick;
  m.closed_loop_max_residual = max_closed_loop_residual(log);
  m.s_squared_integral = s_squared_integral(log);
  m.final_error = inf_norm(log.rows.back().position_error);
  for (const auto& row : log.rows) {
    m.max_jhat_condition = std::max(m.max_jhat_condition, row.jhat_condition);
  }
  return m;
}

}  // namespace ajac
