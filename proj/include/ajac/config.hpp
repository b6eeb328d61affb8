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

// Experiment config files.
//
// Grammar (one assignment per line):
//   line    := [ key "=" value ] [ "#" comment ]
//   key     := section "." name          e.g. gains.alpha
//   value   := word | number { [","] number }, optionally wrapped in [ ]
//   number  := decimal literal | "pi" | "-pi" | literal "*pi" | "pi/" literal
//
// Matrix-valued keys accept one number (s * I), n numbers (diagonal) or n*n
// numbers (row-major). Later assignments to the same key win, and --set
// overrides are applied after the file.

#ifndef AJAC_CONFIG_HPP_
#define AJAC_CONFIG_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ajac/analysis.hpp"
#include "ajac/sim.hpp"

namespace ajac {

struct ConfigEntry {
  std::string key;
  std::string value;
  std::string origin;  ///< "file:line" or "--set"
};

using ConfigEntries = std::vector<ConfigEntry>;

struct ResolvedConfig {
  ExperimentConfig experiment;
  MetricsOptions metrics;
};

ConfigEntries parse_config_text(std::string_view text, const std::string& source = "<string>");

/// Parses "key=value" and appends it; rejects unknown keys immediately.
void apply_override(ConfigEntries& entries, std::string_view assignment);

/// Type-checks every entry, resolves derived initial conditions and
/// validates the result. Throws ConfigError.
ResolvedConfig resolve_config(const ConfigEntries& entries);

ResolvedConfig load_config(const std::filesystem::path& path,
                           const std::vector<std::string>& overrides = {});

/// Canonical text with every key resolved to a number; loading it back
/// reproduces the same ExperimentConfig bit for bit.
std::string to_config_text(const ResolvedConfig& config);

/// (key, short description) for every accepted key.
const std::vector<std::pair<std::string, std::string>>& config_schema();

bool is_known_key(std::string_view key);

}  // namespace ajac

#endif  // AJAC_CONFIG_HPP_
