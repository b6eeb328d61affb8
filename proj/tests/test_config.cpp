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

#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <numbers>

#include "ajac/config.hpp"
#include "ajac/errors.hpp"

namespace ajac {
namespace {

const std::filesystem::path kConfigs = AJAC_CONFIG_DIR;

const char* kMinimal = R"(
# comment line
controller.mode = ctrl1   # trailing comment
plant.a_d = [29.7132, 8.6501, 7.1278, 9.412]
initial.q0_offset = 0.05 -0.05
)";

ResolvedConfig resolve_text(const std::string& text, std::vector<std::string> overrides = {}) {
  ConfigEntries e = parse_config_text(text);
  for (const auto& o : overrides) apply_override(e, o);
  return resolve_config(e);
}

TEST(ConfigGrammar, CommentsBracketsAndDefaults) {
  const ResolvedConfig rc = resolve_text(kMinimal);
  EXPECT_EQ(rc.experiment.mode, ControllerMode::kCtrlI);
  EXPECT_EQ(rc.experiment.a_d_true, DynParams<double>(29.7132, 8.6501, 7.1278, 9.412));
  EXPECT_EQ(rc.experiment.sampling, Sampling::kZeroOrderHold);
  EXPECT_DOUBLE_EQ(rc.experiment.gains.alpha, 10.0);
}

TEST(ConfigGrammar, PiTokens) {
  const auto f = [](const char* v) {
    return resolve_text(std::string(kMinimal) + "trajectory.frequency = " + v + "\n")
        .experiment.trajectory.angular_frequency;
  };
  EXPECT_EQ(f("pi"), std::numbers::pi);
  EXPECT_EQ(f("2*pi"), 2 * std::numbers::pi);
  EXPECT_EQ(f("pi/4"), std::numbers::pi / 4);
  EXPECT_EQ(f("-pi/2"), -std::numbers::pi / 2);
}

TEST(ConfigGrammar, MatrixForms) {
  const auto K = [](const char* v) {
    return resolve_text(std::string(kMinimal) + "gains.K = " + v + "\n").experiment.gains.K;
  };
  EXPECT_EQ(K("30"), 30 * Eigen::Matrix2d::Identity());
  EXPECT_EQ(K("30 20"), Eigen::Vector2d(30, 20).asDiagonal().toDenseMatrix());
  Eigen::Matrix2d full;
  full << 30, 1, 1, 20;
  EXPECT_EQ(K("30 1 1 20"), full);
  EXPECT_THROW(K("1 2 3"), ConfigError);
}

TEST(ConfigGrammar, RejectsUnknownKeysAndBadTypes) {
  EXPECT_THROW(parse_config_text("gains.alfa = 3\n"), ConfigError);
  EXPECT_THROW(parse_config_text("no equals sign\n"), ConfigError);
  EXPECT_THROW(resolve_text(std::string(kMinimal) + "gains.alpha = ten\n"), ConfigError);
  EXPECT_THROW(resolve_text(std::string(kMinimal) + "controller.mode = ctrl9\n"), ConfigError);
  EXPECT_THROW(resolve_text(std::string(kMinimal) + "sim.seed = -1\n"), ConfigError);
  EXPECT_THROW(resolve_text(std::string(kMinimal) + "initial.elbow = 2\n"), ConfigError);
  EXPECT_THROW(resolve_text(std::string(kMinimal) + "plant.a_k = 2 3\n"), ConfigError);
}

TEST(ConfigGrammar, ErrorMessageNamesLineAndKey) {
  try {
    resolve_text(std::string(kMinimal) + "gains.beta = x\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("<string>:6"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("gains.beta"), std::string::npos);
  }
}

TEST(ConfigOverrides, LaterAssignmentWinsAndIsTypeChecked) {
  const ResolvedConfig rc = resolve_text(kMinimal, {"gains.alpha=3.5", "sim.sampling = continuous"});
  EXPECT_DOUBLE_EQ(rc.experiment.gains.alpha, 3.5);
  EXPECT_EQ(rc.experiment.sampling, Sampling::kContinuous);
  EXPECT_THROW(resolve_text(kMinimal, {"gains.alpha=abc"}), ConfigError);
  ConfigEntries e;
  EXPECT_THROW(apply_override(e, "bogus.key=1"), ConfigError);
}

TEST(ConfigValidation, PublishedGroupedParametersAreRejected) {
  try {
    resolve_text(kMinimal, {"plant.a_d = 7.9628 -0.96 19.2828 10.1495"});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("not positive definite"), std::string::npos);
  }
}

TEST(ConfigInitialState, AutoAndMatched) {
  const ResolvedConfig rc = resolve_text(kMinimal, {"initial.dq0 = matched"});
  const auto& c = rc.experiment;
  EXPECT_NEAR((forward_kinematics(c.q0, c.a_k_true) - c.trajectory.at(0).x -
               Eigen::Vector2d(0.05, -0.05)).norm(), 0.0, 1e-12);
  EXPECT_EQ(c.dq0, matched_joint_velocity(c));
  EXPECT_THROW(resolve_text(kMinimal, {"initial.q0_offset = 50 50"}), ConfigError);
  const ResolvedConfig fixed = resolve_text(kMinimal, {"initial.q0 = 0.2 1.1", "initial.dq0 = 0.1 0"});
  EXPECT_EQ(fixed.experiment.q0, Eigen::Vector2d(0.2, 1.1));
  EXPECT_EQ(fixed.experiment.dq0, Eigen::Vector2d(0.1, 0.0));
}

TEST(ConfigEcho, RoundTripIsBitExact) {
  for (const auto& entry : std::filesystem::directory_iterator(kConfigs)) {
    const ResolvedConfig a = load_config(entry.path());
    const ResolvedConfig b = resolve_config(parse_config_text(to_config_text(a)));
    EXPECT_EQ(to_config_text(a), to_config_text(b)) << entry.path();
    EXPECT_EQ(std::memcmp(a.experiment.q0.data(), b.experiment.q0.data(), 2 * sizeof(double)), 0);
    EXPECT_EQ(a.experiment.dq0, b.experiment.dq0);
    EXPECT_EQ(a.experiment.gains.K, b.experiment.gains.K);
    EXPECT_EQ(a.experiment.a_d_true, b.experiment.a_d_true);
  }
}

TEST(ConfigSchema, EveryKeyIsEchoed) {
  const ResolvedConfig rc = resolve_text(kMinimal);
  const std::string text = to_config_text(rc);
  for (const auto& [key, help] : config_schema()) {
    if (key == "initial.q0_offset" || key == "initial.elbow") continue;  // folded into q0
    EXPECT_NE(text.find(key + " = "), std::string::npos) << key;
    EXPECT_FALSE(help.empty());
  }
}

TEST(BundledConfigs, AllLoad) {
  int n = 0;
  for (const auto& entry : std::filesystem::directory_iterator(kConfigs)) {
    EXPECT_NO_THROW(load_config(entry.path())) << entry.path();
    ++n;
  }
  EXPECT_GE(n, 5);
  EXPECT_THROW(load_config(kConfigs / "missing.cfg"), ConfigError);
}

}  // namespace
}  // namespace ajac
