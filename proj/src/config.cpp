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

#include "ajac/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "ajac/errors.hpp"

namespace ajac {
namespace {

struct Builder {
  ResolvedConfig out;
  std::string q0 = "auto";
  Eigen::Vector2d q0_offset = Eigen::Vector2d::Zero();
  int elbow = 1;
  std::string dq0 = "zero";
};

struct Field {
  const ConfigEntry& entry;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError(entry.origin + ": " + entry.key + ": " + msg);
  }
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_literal(std::string_view tok, double& out) {
  if (tok.empty()) return false;
  if (tok.front() == '+') tok.remove_prefix(1);
  const auto* end = tok.data() + tok.size();
  const auto res = std::from_chars(tok.data(), end, out);
  return res.ec == std::errc() && res.ptr == end;
}

bool parse_number(std::string_view tok, double& out) {
  constexpr double pi = std::numbers::pi;
  if (tok == "pi") return out = pi, true;
  if (tok == "-pi") return out = -pi, true;
  if (tok.size() > 3 && tok.substr(tok.size() - 3) == "*pi") {
    double k;
    if (!parse_literal(tok.substr(0, tok.size() - 3), k)) return false;
    return out = k * pi, true;
  }
  const bool neg = tok.starts_with("-pi/");
  if (neg || tok.starts_with("pi/")) {
    double k;
    if (!parse_literal(tok.substr(neg ? 4 : 3), k) || k == 0.0) return false;
    return out = (neg ? -pi : pi) / k, true;
  }
  return parse_literal(tok, out);
}

std::vector<double> numbers(const Field& f) {
  std::string_view v = trim(f.entry.value);
  if (v.starts_with('[')) {
    if (!v.ends_with(']')) f.fail("unterminated '['");
    v = v.substr(1, v.size() - 2);
  }
  std::string text(v);
  for (char& c : text) {
    if (c == ',') c = ' ';
  }
  std::istringstream is(text);
  std::vector<double> out;
  for (std::string tok; is >> tok;) {
    double x;
    if (!parse_number(tok, x)) f.fail("expected a number, got '" + tok + "'");
    if (!std::isfinite(x)) f.fail("non-finite value '" + tok + "'");
    out.push_back(x);
  }
  if (out.empty()) f.fail("missing value");
  return out;
}

double scalar(const Field& f) {
  const auto v = numbers(f);
  if (v.size() != 1) f.fail("expected one number, got " + std::to_string(v.size()));
  return v[0];
}

template <int N>
Eigen::Matrix<double, N, 1> vec(const Field& f) {
  const auto v = numbers(f);
  if (static_cast<int>(v.size()) != N) {
    f.fail("expected " + std::to_string(N) + " numbers, got " + std::to_string(v.size()));
  }
  return Eigen::Map<const Eigen::Matrix<double, N, 1>>(v.data());
}

template <int N>
Eigen::Matrix<double, N, N> mat(const Field& f) {
  const auto v = numbers(f);
  const int n = static_cast<int>(v.size());
  if (n == 1) return v[0] * Eigen::Matrix<double, N, N>::Identity();
  if (n == N) return Eigen::Map<const Eigen::Matrix<double, N, 1>>(v.data()).asDiagonal();
  if (n == N * N) return Eigen::Map<const Eigen::Matrix<double, N, N, Eigen::RowMajor>>(v.data());
  f.fail("expected 1, " + std::to_string(N) + " or " + std::to_string(N * N) + " numbers, got " +
         std::to_string(n));
}

std::string word(const Field& f) {
  const std::string_view v = trim(f.entry.value);
  if (v.empty() || v.find_first_of(" \t,") != std::string_view::npos) f.fail("expected one word");
  return std::string(v);
}

std::uint64_t unsigned_integer(const Field& f) {
  const std::string_view v = trim(f.entry.value);
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) f.fail("expected an unsigned integer");
  return out;
}

using Setter = std::function<void(Builder&, const Field&)>;

struct Key {
  std::string name;
  std::string help;
  Setter set;
};

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      {"controller.mode",
       "ctrl1 | ctrl2 | ctrl1_performance | transpose_baseline | velocity_command1 | "
       "velocity_command2",
       [](Builder& b, const Field& f) {
         const auto mode = parse_mode(word(f));
         if (!mode) f.fail("unknown mode '" + f.entry.value + "'");
         b.out.experiment.mode = *mode;
       }},
      {"gains.K", "2x2 feedback gain", [](Builder& b, const Field& f) {
         b.out.experiment.gains.K = mat<2>(f);
       }},
      {"gains.alpha", "task-space error gain", [](Builder& b, const Field& f) {
         b.out.experiment.gains.alpha = scalar(f);
       }},
      {"gains.beta", "velocity-error weight in the kinematic law, [0, 1]",
       [](Builder& b, const Field& f) { b.out.experiment.gains.beta = scalar(f); }},
      {"gains.gamma_d", "4x4 dynamic adaptation gain", [](Builder& b, const Field& f) {
         b.out.experiment.gains.gamma_d = mat<4>(f);
       }},
      {"gains.gamma_k", "3x3 kinematic adaptation gain", [](Builder& b, const Field& f) {
         b.out.experiment.gains.gamma_k = mat<3>(f);
       }},
      {"gains.lambda_c", "performance-mode gain (K = lambda_c * M_hat)",
       [](Builder& b, const Field& f) { b.out.experiment.gains.lambda_c = scalar(f); }},
      {"gains.inertia_floor", "epsilon added to the performance-mode gain",
       [](Builder& b, const Field& f) { b.out.experiment.gains.inertia_floor = scalar(f); }},
      {"plant.a_k", "true kinematic parameters [l1, a, b]", [](Builder& b, const Field& f) {
         b.out.experiment.a_k_true = vec<3>(f);
       }},
      {"plant.a_d", "true dynamic parameters [theta1..theta4]", [](Builder& b, const Field& f) {
         b.out.experiment.a_d_true = vec<4>(f);
       }},
      {"plant.gravity", "gravitational acceleration", [](Builder& b, const Field& f) {
         b.out.experiment.model.gravity = scalar(f);
       }},
      {"plant.l1_ref", "reference first-link length in the gravity terms",
       [](Builder& b, const Field& f) {
         const double v = scalar(f);
         if (!(v > 0.0)) f.fail("must be positive");
         b.out.experiment.model.l1_ref = v;
       }},
      {"estimate.a_k0", "initial kinematic estimate", [](Builder& b, const Field& f) {
         b.out.experiment.a_k_hat0 = vec<3>(f);
       }},
      {"estimate.a_d0", "initial dynamic estimate", [](Builder& b, const Field& f) {
         b.out.experiment.a_d_hat0 = vec<4>(f);
       }},
      {"initial.q0", "auto | q1 q2 (auto: inverse kinematics of x_d(0) + offset)",
       [](Builder& b, const Field& f) {
         if (trim(f.entry.value) != "auto") vec<2>(f);
         b.q0 = std::string(trim(f.entry.value));
       }},
      {"initial.q0_offset", "task-space offset used by q0 = auto", [](Builder& b, const Field& f) {
         b.q0_offset = vec<2>(f);
       }},
      {"initial.elbow", "+1 | -1, inverse-kinematics branch for q0 = auto",
       [](Builder& b, const Field& f) {
         const double v = scalar(f);
         if (v != 1.0 && v != -1.0) f.fail("must be 1 or -1");
         b.elbow = static_cast<int>(v);
       }},
      {"initial.dq0", "zero | matched | dq1 dq2 (matched: dq0 = qr_dot(0), so s(0) = 0)",
       [](Builder& b, const Field& f) {
         const std::string_view v = trim(f.entry.value);
         if (v != "zero" && v != "matched") vec<2>(f);
         b.dq0 = std::string(v);
       }},
      {"trajectory.center", "circle center", [](Builder& b, const Field& f) {
         b.out.experiment.trajectory.center = vec<2>(f);
       }},
      {"trajectory.radius", "circle radius", [](Builder& b, const Field& f) {
         b.out.experiment.trajectory.radius = scalar(f);
       }},
      {"trajectory.frequency", "angular frequency in rad/s", [](Builder& b, const Field& f) {
         b.out.experiment.trajectory.angular_frequency = scalar(f);
       }},
      {"sim.t_end", "run length", [](Builder& b, const Field& f) {
         b.out.experiment.t_end = scalar(f);
       }},
      {"sim.dt_control", "control period (log tick)", [](Builder& b, const Field& f) {
         b.out.experiment.dt_control = scalar(f);
       }},
      {"sim.dt_plant", "plant integration step", [](Builder& b, const Field& f) {
         b.out.experiment.dt_plant = scalar(f);
       }},
      {"sim.sampling", "zoh | continuous", [](Builder& b, const Field& f) {
         const std::string v = word(f);
         if (v == "zoh") b.out.experiment.sampling = Sampling::kZeroOrderHold;
         else if (v == "continuous") b.out.experiment.sampling = Sampling::kContinuous;
         else f.fail("expected zoh or continuous");
       }},
      {"sim.servo_gain", "joint velocity servo gain (velocity-command modes)",
       [](Builder& b, const Field& f) { b.out.experiment.servo_gain = scalar(f); }},
      {"sim.seed", "sensor-noise seed", [](Builder& b, const Field& f) {
         b.out.experiment.seed = unsigned_integer(f);
       }},
      {"sim.condition_limit", "singularity abort threshold on cond(J_hat) and cond(M)",
       [](Builder& b, const Field& f) { b.out.experiment.condition_limit = scalar(f); }},
      {"sim.divergence_limit", "abort when |x - x_d| exceeds this", [](Builder& b, const Field& f) {
         b.out.experiment.divergence_limit = scalar(f);
       }},
      {"sensor.noise_pos", "task-position noise standard deviation",
       [](Builder& b, const Field& f) { b.out.experiment.sensor_noise_pos = scalar(f); }},
      {"sensor.noise_vel", "task-velocity noise standard deviation",
       [](Builder& b, const Field& f) { b.out.experiment.sensor_noise_vel = scalar(f); }},
      {"projection.lower", "lower corner of the kinematic estimate box",
       [](Builder& b, const Field& f) { b.out.experiment.box.lower = vec<3>(f); }},
      {"projection.upper", "upper corner of the kinematic estimate box",
       [](Builder& b, const Field& f) { b.out.experiment.box.upper = vec<3>(f); }},
      {"analysis.steady_state_from", "start of the steady-state window",
       [](Builder& b, const Field& f) { b.out.metrics.steady_state_from = scalar(f); }},
      {"analysis.settling_fraction", "settling threshold as a fraction of the initial error",
       [](Builder& b, const Field& f) { b.out.metrics.settling_fraction = scalar(f); }},
      {"analysis.decay_fraction", "decay-fit window ends when |dx| drops below this fraction",
       [](Builder& b, const Field& f) { b.out.metrics.decay_fraction = scalar(f); }},
  };
  return table;
}

const Key* find_key(std::string_view name) {
  for (const auto& k : keys()) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

ConfigEntry split_assignment(std::string_view line, const std::string& origin) {
  const auto eq = line.find('=');
  if (eq == std::string_view::npos) throw ConfigError(origin + ": expected 'key = value'");
  ConfigEntry e{std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))),
                origin};
  if (e.key.empty()) throw ConfigError(origin + ": empty key");
  if (!find_key(e.key)) throw ConfigError(origin + ": unknown key '" + e.key + "'");
  if (e.value.empty()) throw ConfigError(origin + ": " + e.key + ": missing value");
  return e;
}

std::string fmt(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

template <typename Derived>
std::string fmt(const Eigen::MatrixBase<Derived>& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (!out.empty()) out += ' ';
      out += fmt(m(i, j));
    }
  }
  return out;
}

}  // namespace

ConfigEntries parse_config_text(std::string_view text, const std::string& source) {
  ConfigEntries entries;
  int lineno = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    entries.push_back(split_assignment(line, source + ":" + std::to_string(lineno)));
  }
  return entries;
}

void apply_override(ConfigEntries& entries, std::string_view assignment) {
  entries.push_back(split_assignment(assignment, "--set"));
}

ResolvedConfig resolve_config(const ConfigEntries& entries) {
  Builder b;
  for (const auto& e : entries) {
    const Key* k = find_key(e.key);
    if (!k) throw ConfigError(e.origin + ": unknown key '" + e.key + "'");
    k->set(b, Field{e});
  }
  ExperimentConfig& cfg = b.out.experiment;
  if (b.q0 == "auto") {
    try {
      cfg.q0 = initial_joint_position(cfg.trajectory, cfg.a_k_true, b.q0_offset, b.elbow);
    } catch (const std::domain_error& err) {
      throw ConfigError(std::string("initial.q0 = auto: ") + err.what());
    }
  } else {
    cfg.q0 = vec<2>(Field{ConfigEntry{"initial.q0", b.q0, "resolved"}});
  }
  if (b.dq0 == "zero") {
    cfg.dq0.setZero();
  } else if (b.dq0 == "matched") {
    validate(cfg);
    try {
      cfg.dq0 = matched_joint_velocity(cfg);
    } catch (const SingularityError& err) {
      throw ConfigError(std::string("initial.dq0 = matched: ") + err.what());
    }
  } else {
    cfg.dq0 = vec<2>(Field{ConfigEntry{"initial.dq0", b.dq0, "resolved"}});
  }
  validate(cfg);
  return b.out;
}

ResolvedConfig load_config(const std::filesystem::path& path,
                           const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  ConfigEntries entries = parse_config_text(ss.str(), path.string());
  for (const auto& o : overrides) apply_override(entries, o);
  return resolve_config(entries);
}

std::string to_config_text(const ResolvedConfig& rc) {
  const ExperimentConfig& c = rc.experiment;
  std::ostringstream os;
  auto put = [&os](const char* key, const std::string& value) {
    os << key << " = " << value << '\n';
  };
  put("controller.mode", std::string(to_string(c.mode)));
  put("gains.K", fmt(c.gains.K));
  put("gains.alpha", fmt(c.gains.alpha));
  put("gains.beta", fmt(c.gains.beta));
  put("gains.gamma_d", fmt(c.gains.gamma_d));
  put("gains.gamma_k", fmt(c.gains.gamma_k));
  put("gains.lambda_c", fmt(c.gains.lambda_c));
  put("gains.inertia_floor", fmt(c.gains.inertia_floor));
  put("plant.a_k", fmt(c.a_k_true));
  put("plant.a_d", fmt(c.a_d_true));
  put("plant.gravity", fmt(c.model.gravity));
  put("plant.l1_ref", fmt(c.model.l1_ref));
  put("estimate.a_k0", fmt(c.a_k_hat0));
  put("estimate.a_d0", fmt(c.a_d_hat0));
  put("initial.q0", fmt(c.q0));
  put("initial.dq0", fmt(c.dq0));
  put("trajectory.center", fmt(c.trajectory.center));
  put("trajectory.radius", fmt(c.trajectory.radius));
  put("trajectory.frequency", fmt(c.trajectory.angular_frequency));
  put("sim.t_end", fmt(c.t_end));
  put("sim.dt_control", fmt(c.dt_control));
  put("sim.dt_plant", fmt(c.dt_plant));
  put("sim.sampling", c.sampling == Sampling::kContinuous ? "continuous" : "zoh");
  put("sim.servo_gain", fmt(c.servo_gain));
  put("sim.seed", std::to_string(c.seed));
  put("sim.condition_limit", fmt(c.condition_limit));
  put("sim.divergence_limit", fmt(c.divergence_limit));
  put("sensor.noise_pos", fmt(c.sensor_noise_pos));
  put("sensor.noise_vel", fmt(c.sensor_noise_vel));
  put("projection.lower", fmt(c.box.lower));
  put("projection.upper", fmt(c.box.upper));
  put("analysis.steady_state_from", fmt(rc.metrics.steady_state_from));
  put("analysis.settling_fraction", fmt(rc.metrics.settling_fraction));
  put("analysis.decay_fraction", fmt(rc.metrics.decay_fraction));
  return os.str();
}

const std::vector<std::pair<std::string, std::string>>& config_schema() {
  static const auto schema = [] {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& k : keys()) out.emplace_back(k.name, k.help);
    return out;
  }();
  return schema;
}

bool is_known_key(std::string_view key) { return find_key(key) != nullptr; }

}  // namespace ajac
