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

#ifndef AJAC_REPORT_HPP_
#define AJAC_REPORT_HPP_

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "ajac/analysis.hpp"
#include "ajac/config.hpp"

namespace ajac {

/// 17 significant digits, locale independent.
std::string format_double(double x);

/// One row per control tick, fixed column order.
void write_log_csv(std::ostream& os, const SimLog& log);

/// V1, the certificate terms and the closed-loop residual per tick.
void write_lyapunov_csv(std::ostream& os, const SimLog& log);

/// Whitespace-separated columns: t ex1 ex2.
void write_tracking_error_dat(std::ostream& os, const SimLog& log);

/// Whitespace-separated columns: t tau1 tau2.
void write_joint_torque_dat(std::ostream& os, const SimLog& log);

/// Flat {"key": number|string} object.
std::string metrics_json(const SimLog& log, const RunMetrics& metrics);

/// Writes log.csv, lyapunov.csv, metrics.json, tracking_error.dat,
/// joint_torque.dat and config.cfg (the resolved config) into dir.
void write_run_artifacts(const std::filesystem::path& dir, const ResolvedConfig& config,
                         const SimLog& log, const RunMetrics& metrics);

struct ComparisonRow {
  std::string name;
  ControllerMode mode;
  Termination termination;
  RunMetrics metrics;
};

void write_comparison_text(std::ostream& os, const std::vector<ComparisonRow>& rows);
void write_comparison_csv(std::ostream& os, const std::vector<ComparisonRow>& rows);

std::string_view to_string(Termination termination);

}  // namespace ajac

#endif  // AJAC_REPORT_HPP_
