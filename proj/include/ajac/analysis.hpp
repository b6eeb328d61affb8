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

#ifndef AJAC_ANALYSIS_HPP_
#define AJAC_ANALYSIS_HPP_

#include <array>
#include <optional>
#include <stdexcept>

#include "ajac/sim.hpp"

namespace ajac {

class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// max over t >= t0 of the per-axis infinity norm of the position error.
double steady_state_error(const SimLog& log, double t0);

/// Negated least-squares slope of log |dx(t)|_2 on [t_begin, t_end].
double fit_decay_rate(const SimLog& log, double t_begin, double t_end);

/// Same, over the window from the first tick to the first time |dx| drops
/// below fraction * |dx(0)|.
double fit_decay_rate(const SimLog& log, double fraction = 0.01);

/// Earliest time after which |dx|_inf stays at or below fraction * |dx(0)|_inf.
/// Infinity if the trace never settles inside the log.
double settling_time(const SimLog& log, double fraction = 0.05);

/// Per-axis version. Each axis is measured against the same threshold,
/// fraction * |dx(0)|_inf, so axes with a small initial error are not
/// penalised for noise.
std::array<double, 2> axis_settling_times(const SimLog& log, double fraction = 0.05);

double max_torque(const SimLog& log);

struct LyapunovAudit {
  /// Absent for velocity-command modes, where V1 is not a certificate.
  std::optional<double> v1_max_uptick;
  /// Absent when the mode has no kinematic certificate.
  std::optional<double> v2_max_uptick;
};

/// Maximum single-step relative increase. The denominator is floored at
/// relative_floor * max(V) so that round-off near V = 0 is not amplified, and
/// rises below absolute_tolerance (round-off for O(1..100) energies) are ignored.
LyapunovAudit lyapunov_audit(const SimLog& log, double relative_floor = 1e-10,
                             double absolute_tolerance = 1e-14);

double max_closed_loop_residual(const SimLog& log);

double s_squared_integral(const SimLog& log);

struct MetricsOptions {
  double steady_state_from = 6.0;
  double settling_fraction = 0.05;
  double decay_fraction = 0.01;
};

struct RunMetrics {
  double max_err_after = 0.0;
  double settling_time = 0.0;
  std::array<double, 2> axis_settling{};
  /// NaN when the fit is degenerate.
  double fitted_decay_rate = 0.0;
  double max_torque = 0.0;
  std::optional<double> v1_max_uptick;
  std::optional<double> v2_max_uptick;
  double closed_loop_max_residual = 0.0;
  double s_squared_integral = 0.0;
  double final_error = 0.0;
  double max_jhat_condition = 0.0;
};

RunMetrics compute_metrics(const SimLog& log, const MetricsOptions& options = {});

}  // namespace ajac

#endif  // AJAC_ANALYSIS_HPP_
