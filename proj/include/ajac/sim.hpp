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

#ifndef AJAC_SIM_HPP_
#define AJAC_SIM_HPP_

#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "ajac/controllers.hpp"
#include "ajac/lyapunov.hpp"

namespace ajac {

/// How the digital controller meets the continuous plant.
enum class Sampling {
  /// Controller evaluated once per dt_control; torque (or velocity command)
  /// held constant over the interval; estimates advanced by explicit Euler.
  kZeroOrderHold,
  /// Controller evaluated at every integrator stage; estimates integrated
  /// jointly with the plant by RK4 at dt_plant. dt_control is the log tick.
  kContinuous,
};

struct TrajectoryPoint {
  Eigen::Vector2d x;
  Eigen::Vector2d dx;
  Eigen::Vector2d ddx;
};

/// Circle x_d(t) = center + radius [cos(w t), sin(w t)].
struct DesiredTrajectory {
  Eigen::Vector2d center{1.6754, 3.9950};
  double radius = 0.3;
  double angular_frequency = std::numbers::pi;

  TrajectoryPoint at(double t) const;
  bool operator==(const DesiredTrajectory&) const = default;
};

struct ExperimentConfig {
  ControllerMode mode = ControllerMode::kCtrlI;
  Gains<double> gains{};
  KinParams<double> a_k_true{2.0, 3.3856, 0.8};
  DynParams<double> a_d_true = DynParams<double>::Zero();
  KinParams<double> a_k_hat0{4.0, 5.0, 2.0};
  DynParams<double> a_d_hat0 = DynParams<double>::Zero();
  Eigen::Vector2d q0 = Eigen::Vector2d::Zero();
  Eigen::Vector2d dq0 = Eigen::Vector2d::Zero();
  DesiredTrajectory trajectory{};
  double t_end = 10.0;
  double dt_control = 0.005;
  double dt_plant = 0.001;
  Sampling sampling = Sampling::kZeroOrderHold;
  ProjectionBox<double> box{};
  /// Velocity-command modes only.
  double servo_gain = 1000.0;
  double sensor_noise_pos = 0.0;
  double sensor_noise_vel = 0.0;
  std::uint64_t seed = 1;
  ModelOptions<double> model{};
  double condition_limit = kDefaultConditionLimit;
  double divergence_limit = 10.0;
};

/// Throws ConfigError describing the first violated invariant.
void validate(const ExperimentConfig& config);

/// Plant substeps per control interval.
int plant_substeps(const ExperimentConfig& config);

/// Joint configuration putting the true end effector at x_d(0) + offset.
Eigen::Vector2d initial_joint_position(const DesiredTrajectory& trajectory,
                                       const KinParams<double>& a_k_true,
                                       const Eigen::Vector2d& offset, int elbow = 1);

/// Joint velocity making s(0) = 0 for the configured mode, q0 and a_k_hat0.
Eigen::Vector2d matched_joint_velocity(const ExperimentConfig& config);

/// Industrial inner velocity loop with true-gravity compensation.
Eigen::Vector2d joint_servo_step(const Eigen::Vector2d& q, const Eigen::Vector2d& dq,
                                 const Eigen::Vector2d& qr_dot, double servo_gain,
                                 const DynParams<double>& a_d_true,
                                 const ModelOptions<double>& model = {});

/// n_substeps RK4 steps of size dt_plant with the torque held at tau_held.
JointState<double> integrate_plant(const JointState<double>& state,
                                   const Eigen::Vector2d& tau_held,
                                   const DynParams<double>& a_d_true, double dt_plant,
                                   int n_substeps, const ModelOptions<double>& model = {},
                                   double condition_limit = kDefaultConditionLimit);

enum class Termination { kCompleted, kSingularity, kDivergence };

/// One record per control tick.
struct LogRow {
  double t = 0.0;
  Eigen::Vector2d q, dq, x, dx, x_d, dx_d, position_error, velocity_error, s, tau, qr_dot;
  KinParams<double> a_k_hat;
  DynParams<double> a_d_hat;
  double v1 = 0.0;
  /// State part of the mode's kinematic certificate (zero when it has none).
  double v2_state = 0.0;
  /// Running dissipation integral of the certificate: int |J s|^2 (V2) or int |s|^2 (V2*).
  double dissipation = 0.0;
  /// Change of v2_state - dissipation / (2 alpha) since the previous tick.
  double v2_increment = 0.0;
  /// Norm of the task-space closed-loop identity residual.
  double residual = 0.0;
  /// int |s|^2 dt from t = 0.
  double s_squared_integral = 0.0;
  double jhat_condition = 1.0;
};

struct SimLog {
  ControllerMode mode = ControllerMode::kCtrlI;
  KinematicCertificate certificate = KinematicCertificate::kNone;
  double alpha = 1.0;
  double dt_control = 0.0;
  std::vector<LogRow> rows;
  Termination termination = Termination::kCompleted;
  std::string message;

  bool completed() const { return termination == Termination::kCompleted; }
};

/// Runs one closed-loop experiment over [0, t_end]. Singularity and
/// divergence stop the run early; the partial log is kept.
SimLog run_experiment(const ExperimentConfig& config);

}  // namespace ajac

#endif  // AJAC_SIM_HPP_
