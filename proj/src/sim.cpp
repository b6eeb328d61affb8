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

#include "ajac/sim.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "ajac/integrator.hpp"

namespace ajac {
namespace {

using Eigen::Vector2d;
// q, dq, certificate dissipation integral, int |s|^2
using PlantState = Eigen::Matrix<double, 6, 1>;
// q, dq, a_k_hat, a_d_hat, certificate dissipation integral, int |s|^2
using FullState = Eigen::Matrix<double, 13, 1>;

struct SensorNoise {
  Vector2d x = Vector2d::Zero();
  Vector2d dx = Vector2d::Zero();
};

class NoiseSource {
 public:
  NoiseSource(double std_pos, double std_vel, std::uint64_t seed)
      : std_pos_(std_pos), std_vel_(std_vel), rng_(seed) {}

  SensorNoise draw() {
    SensorNoise n;
    if (std_pos_ > 0.0) n.x = Vector2d(normal_(rng_), normal_(rng_)) * std_pos_;
    if (std_vel_ > 0.0) n.dx = Vector2d(normal_(rng_), normal_(rng_)) * std_vel_;
    return n;
  }

 private:
  double std_pos_;
  double std_vel_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

SensorSample<double> sense(const ExperimentConfig& cfg, double t, const Vector2d& q,
                           const Vector2d& dq, const SensorNoise& noise) {
  const TrajectoryPoint ref = cfg.trajectory.at(t);
  SensorSample<double> sample;
  sample.q = q;
  sample.dq = dq;
  sample.x = forward_kinematics(q, cfg.a_k_true) + noise.x;
  sample.dx = jacobian(q, cfg.a_k_true) * dq + noise.dx;
  sample.x_d = ref.x;
  sample.dx_d = ref.dx;
  sample.ddx_d = ref.ddx;
  return sample;
}

Vector2d applied_torque(const ExperimentConfig& cfg, const Vector2d& q, const Vector2d& dq,
                        const Vector2d& tau, const Vector2d& qr_dot) {
  if (produces_torque(cfg.mode)) return tau;
  return joint_servo_step(q, dq, qr_dot, cfg.servo_gain, cfg.a_d_true, cfg.model);
}

double dissipation_integrand(KinematicCertificate cert, const ExperimentConfig& cfg,
                             const Vector2d& q, const Vector2d& s) {
  switch (cert) {
    case KinematicCertificate::kV2: return (jacobian(q, cfg.a_k_true) * s).squaredNorm();
    case KinematicCertificate::kV2Star: return s.squaredNorm();
    case KinematicCertificate::kNone: return 0.0;
  }
  return 0.0;
}

double certificate_state(KinematicCertificate cert, const ExperimentConfig& cfg,
                         const SensorSample<double>& sample, const KinParams<double>& a_k_hat) {
  const Vector2d err = sample.position_error();
  switch (cert) {
    case KinematicCertificate::kV2:
      return lyapunov_v2_state(err, cfg.a_k_true, a_k_hat, cfg.gains.gamma_k, cfg.gains.beta);
    case KinematicCertificate::kV2Star:
      return lyapunov_v2star_state(err, cfg.a_k_true, a_k_hat, cfg.gains.gamma_k);
    case KinematicCertificate::kNone: return 0.0;
  }
  return 0.0;
}

bool is_spd(const Eigen::MatrixXd& m) {
  if (!m.allFinite() || !m.isApprox(m.transpose(), 1e-12)) return false;
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  return llt.info() == Eigen::Success;
}

template <typename Derived>
std::string format_vector(const Eigen::MatrixBase<Derived>& v) {
  std::ostringstream os;
  os.precision(17);
  os << "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v(i);
  os << "]";
  return os.str();
}

}  // namespace

TrajectoryPoint DesiredTrajectory::at(double t) const {
  const double w = angular_frequency;
  const double c = std::cos(w * t), s = std::sin(w * t);
  return {center + radius * Vector2d(c, s), radius * w * Vector2d(-s, c),
          -radius * w * w * Vector2d(c, s)};
}

int plant_substeps(const ExperimentConfig& config) {
  return static_cast<int>(std::llround(config.dt_control / config.dt_plant));
}

void validate(const ExperimentConfig& cfg) {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (!(cfg.t_end > 0.0)) fail("sim.t_end must be positive");
  if (!(cfg.dt_control > 0.0) || !(cfg.dt_plant > 0.0)) fail("time steps must be positive");
  {
    const double ratio = cfg.dt_control / cfg.dt_plant;
    if (ratio < 1.0 - 1e-9 || std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
      fail("sim.dt_control must be an integer multiple of sim.dt_plant");
    }
  }
  const auto& g = cfg.gains;
  if (!is_spd(g.K)) fail("gains.K must be symmetric positive definite");
  if (!is_spd(g.gamma_d)) fail("gains.gamma_d must be symmetric positive definite");
  if (!is_spd(g.gamma_k)) fail("gains.gamma_k must be symmetric positive definite");
  if (!(g.alpha > 0.0)) fail("gains.alpha must be positive");
  if (!(g.beta >= 0.0 && g.beta <= 1.0)) fail("gains.beta must lie in [0, 1]");
  if (!(g.lambda_c > 0.0)) fail("gains.lambda_c must be positive");
  if (!(g.inertia_floor >= 0.0)) fail("gains.inertia_floor must be nonnegative");
  if (!(cfg.a_k_true(0) > 0.0)) fail("plant.a_k: link length l1 must be positive");
  if (!((cfg.box.lower.array() < cfg.box.upper.array()).all())) {
    fail("projection.lower must be strictly below projection.upper");
  }
  if (!((cfg.a_k_true.array() > cfg.box.lower.array()).all() &&
        (cfg.a_k_true.array() < cfg.box.upper.array()).all())) {
    fail("plant.a_k " + format_vector(cfg.a_k_true) + " must lie strictly inside the projection box");
  }
  if (!cfg.box.contains(cfg.a_k_hat0)) {
    fail("estimate.a_k0 " + format_vector(cfg.a_k_hat0) + " lies outside the projection box");
  }
  if (!cfg.a_d_true.allFinite() || !cfg.a_d_hat0.allFinite() || !cfg.q0.allFinite() ||
      !cfg.dq0.allFinite()) {
    fail("non-finite parameter or initial state");
  }
  const double lowest = min_inertia_eigenvalue(cfg.a_d_true);
  if (!(lowest > 0.0)) {
    fail("plant.a_d " + format_vector(cfg.a_d_true) +
         " gives an inertia matrix that is not positive definite (smallest eigenvalue " +
         std::to_string(lowest) + ")");
  }
  if (!produces_torque(cfg.mode) && !(cfg.servo_gain > 0.0)) {
    fail("sim.servo_gain must be positive for velocity-command modes");
  }
  if (!(cfg.sensor_noise_pos >= 0.0) || !(cfg.sensor_noise_vel >= 0.0)) {
    fail("sensor noise standard deviations must be nonnegative");
  }
  if (!(cfg.condition_limit > 1.0)) fail("sim.condition_limit must exceed 1");
  if (!(cfg.divergence_limit > 0.0)) fail("sim.divergence_limit must be positive");
  if (!(cfg.trajectory.radius >= 0.0)) fail("trajectory.radius must be nonnegative");
  const double cond0 = condition_number(jacobian(cfg.q0, cfg.a_k_hat0));
  if (!(cond0 <= cfg.condition_limit)) {
    fail("initial estimated Jacobian is singular (condition number " + std::to_string(cond0) + ")");
  }
}

Vector2d initial_joint_position(const DesiredTrajectory& trajectory,
                                const KinParams<double>& a_k_true, const Vector2d& offset,
                                int elbow) {
  return inverse_kinematics<double>(trajectory.at(0.0).x + offset, a_k_true, elbow);
}

Vector2d matched_joint_velocity(const ExperimentConfig& cfg) {
  const SensorSample<double> sample = sense(cfg, 0.0, cfg.q0, Vector2d::Zero(), {});
  ControllerMemory<double> memory{cfg.a_k_hat0, cfg.a_d_hat0, cfg.mode};
  return velocity_command(sample, memory, cfg.gains, cfg.condition_limit);
}

Vector2d joint_servo_step(const Vector2d& q, const Vector2d& dq, const Vector2d& qr_dot,
                          double servo_gain, const DynParams<double>& a_d_true,
                          const ModelOptions<double>& model) {
  return -servo_gain * (dq - qr_dot) + gravity(q, a_d_true, model);
}

JointState<double> integrate_plant(const JointState<double>& state, const Vector2d& tau_held,
                                   const DynParams<double>& a_d_true, double dt_plant,
                                   int n_substeps, const ModelOptions<double>& model,
                                   double condition_limit) {
  if (n_substeps < 1) throw std::invalid_argument("integrate_plant: n_substeps must be >= 1");
  using State = Eigen::Vector4d;
  auto f = [&](double, const State& y) {
    State dy;
    dy << y.tail<2>(),
        forward_dynamics<double>(y.head<2>(), y.tail<2>(), tau_held, a_d_true, model,
                                 condition_limit);
    return dy;
  };
  State y;
  y << state.q, state.dq;
  for (int i = 0; i < n_substeps; ++i) y = rk4_step(f, i * dt_plant, y, dt_plant);
  return {y.head<2>(), y.tail<2>()};
}

SimLog run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);

  SimLog log;
  log.mode = cfg.mode;
  log.certificate = kinematic_certificate(cfg.mode);
  log.alpha = cfg.gains.alpha;
  log.dt_control = cfg.dt_control;

  const ControllerOptions<double> opts{cfg.model, cfg.condition_limit};
  const int n_sub = plant_substeps(cfg);
  const double h = cfg.dt_control / n_sub;
  const auto n_ticks = std::llround(cfg.t_end / cfg.dt_control);
  log.rows.reserve(static_cast<std::size_t>(n_ticks + 1));

  NoiseSource noise_source(cfg.sensor_noise_pos, cfg.sensor_noise_vel, cfg.seed);
  Vector2d q = cfg.q0, dq = cfg.dq0;
  KinParams<double> a_k_hat = cfg.a_k_hat0;
  DynParams<double> a_d_hat = cfg.a_d_hat0;
  double dissipation = 0.0, s_squared = 0.0;
  double prev_level = 0.0;

  try {
    for (long long k = 0; k <= n_ticks; ++k) {
      const double t = static_cast<double>(k) * cfg.dt_control;
      if (!q.allFinite() || !dq.allFinite() || !a_k_hat.allFinite() || !a_d_hat.allFinite()) {
        throw DivergenceError("state became non-finite before t = " + std::to_string(t));
      }
      const SensorNoise noise = noise_source.draw();
      const SensorSample<double> sample = sense(cfg, t, q, dq, noise);
      const ControllerMemory<double> memory{a_k_hat, a_d_hat, cfg.mode};
      const ControlOutput<double> out = evaluate_controller(sample, memory, cfg.gains, opts);

      LogRow row;
      row.t = t;
      row.q = q;
      row.dq = dq;
      row.x = sample.x;
      row.dx = sample.dx;
      row.x_d = sample.x_d;
      row.dx_d = sample.dx_d;
      row.position_error = sample.position_error();
      row.velocity_error = sample.velocity_error();
      row.s = out.s;
      row.tau = applied_torque(cfg, q, dq, out.tau, out.qr_dot);
      row.qr_dot = out.qr_dot;
      row.a_k_hat = a_k_hat;
      row.a_d_hat = a_d_hat;
      row.v1 = lyapunov_v1(q, out.s, cfg.a_d_true, a_d_hat, cfg.gains.gamma_d);
      row.v2_state = certificate_state(log.certificate, cfg, sample, a_k_hat);
      row.dissipation = dissipation;
      const double level = row.v2_state - dissipation / (2.0 * cfg.gains.alpha);
      row.v2_increment = k == 0 ? 0.0 : level - prev_level;
      prev_level = level;
      row.residual =
          closed_loop_residual(cfg.mode, sample, out.qr_dot, cfg.a_k_true, a_k_hat, cfg.gains.alpha)
              .norm();
      row.s_squared_integral = s_squared;
      row.jhat_condition = out.jhat_condition;
      log.rows.push_back(row);

      if (row.position_error.norm() > cfg.divergence_limit) {
        throw DivergenceError("task-space error exceeded " + std::to_string(cfg.divergence_limit) +
                              " m at t = " + std::to_string(t));
      }
      if (k == n_ticks) break;

      if (cfg.sampling == Sampling::kZeroOrderHold) {
        const Vector2d tau_hold = out.tau;
        const Vector2d qr_hold = out.qr_dot;
        auto f = [&](double, const PlantState& y) {
          const Vector2d yq = y.head<2>(), ydq = y.segment<2>(2);
          const Vector2d tau = applied_torque(cfg, yq, ydq, tau_hold, qr_hold);
          const Vector2d s = ydq - qr_hold;
          PlantState dy;
          dy << ydq, forward_dynamics<double>(yq, ydq, tau, cfg.a_d_true, cfg.model,
                                              cfg.condition_limit),
              dissipation_integrand(log.certificate, cfg, yq, s), s.squaredNorm();
          return dy;
        };
        PlantState y;
        y << q, dq, dissipation, s_squared;
        for (int i = 0; i < n_sub; ++i) y = rk4_step(f, t + i * h, y, h);
        q = y.head<2>();
        dq = y.segment<2>(2);
        dissipation = y(4);
        s_squared = y(5);
        a_k_hat = project_kinematic<double>(a_k_hat + cfg.dt_control * out.a_k_hat_dot, cfg.box);
        a_d_hat += cfg.dt_control * out.a_d_hat_dot;
      } else {
        auto f = [&](double ts, const FullState& z) {
          const Vector2d zq = z.head<2>(), zdq = z.segment<2>(2);
          const ControllerMemory<double> mem{
              project_kinematic<double>(z.segment<3>(4), cfg.box),
              z.segment<4>(7), cfg.mode};
          const ControlOutput<double> o =
              evaluate_controller(sense(cfg, ts, zq, zdq, noise), mem, cfg.gains, opts);
          const Vector2d tau = applied_torque(cfg, zq, zdq, o.tau, o.qr_dot);
          FullState dz;
          dz << zdq,
              forward_dynamics<double>(zq, zdq, tau, cfg.a_d_true, cfg.model, cfg.condition_limit),
              o.a_k_hat_dot, o.a_d_hat_dot, dissipation_integrand(log.certificate, cfg, zq, o.s),
              o.s.squaredNorm();
          return dz;
        };
        FullState z;
        z << q, dq, a_k_hat, a_d_hat, dissipation, s_squared;
        for (int i = 0; i < n_sub; ++i) {
          z = rk4_step(f, t + i * h, z, h);
          z.segment<3>(4) = project_kinematic<double>(z.segment<3>(4), cfg.box);
        }
        q = z.head<2>();
        dq = z.segment<2>(2);
        a_k_hat = z.segment<3>(4);
        a_d_hat = z.segment<4>(7);
        dissipation = z(11);
        s_squared = z(12);
      }
    }
  } catch (const SingularityError& e) {
    log.termination = Termination::kSingularity;
    log.message = e.what();
  } catch (const DivergenceError& e) {
    log.termination = Termination::kDivergence;
    log.message = e.what();
  }
  return log;
}

}  // namespace ajac
