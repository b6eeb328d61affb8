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

// Control and adaptation laws for task-space tracking with uncertain
// kinematics and dynamics.
//
// Two joint reference velocities are available:
//   inverse-Jacobian:  qr_dot = Jhat^{-1} (dx_d - alpha dx_err)
//   transpose-error:   qr_dot = Jhat^{-1} dx_d - alpha Jhat^T dx_err
// and both feed the torque law tau = -K s + Y_d(q, dq, qr_dot, qr_ddot) a_d_hat
// with s = dq - qr_dot. Each ControllerMode pairs one reference velocity with
// one kinematic adaptation law; they are never mixed.

#ifndef AJAC_CONTROLLERS_HPP_
#define AJAC_CONTROLLERS_HPP_

#include <optional>
#include <string_view>

#include "ajac/model.hpp"

namespace ajac {

enum class ControllerMode {
  kCtrlI,
  kCtrlII,
  kCtrlIPerformance,
  kTransposeBaseline,
  kVelocityCommandI,
  kVelocityCommandII,
};

constexpr std::string_view to_string(ControllerMode mode) {
  switch (mode) {
    case ControllerMode::kCtrlI: return "ctrl1";
    case ControllerMode::kCtrlII: return "ctrl2";
    case ControllerMode::kCtrlIPerformance: return "ctrl1_performance";
    case ControllerMode::kTransposeBaseline: return "transpose_baseline";
    case ControllerMode::kVelocityCommandI: return "velocity_command1";
    case ControllerMode::kVelocityCommandII: return "velocity_command2";
  }
  return "unknown";
}

inline std::optional<ControllerMode> parse_mode(std::string_view name) {
  for (const auto mode : {ControllerMode::kCtrlI, ControllerMode::kCtrlII,
                          ControllerMode::kCtrlIPerformance, ControllerMode::kTransposeBaseline,
                          ControllerMode::kVelocityCommandI, ControllerMode::kVelocityCommandII}) {
    if (to_string(mode) == name) return mode;
  }
  return std::nullopt;
}

/// True for modes that output a joint torque; the velocity-command modes
/// hand qr_dot to a joint servo instead.
constexpr bool produces_torque(ControllerMode mode) {
  return mode != ControllerMode::kVelocityCommandI && mode != ControllerMode::kVelocityCommandII;
}

/// True for modes built on the transpose-error reference velocity.
constexpr bool uses_transpose_reference(ControllerMode mode) {
  return mode == ControllerMode::kCtrlII || mode == ControllerMode::kVelocityCommandII;
}

template <typename Scalar>
struct Gains {
  Matrix2<Scalar> K = Matrix2<Scalar>::Identity() * Scalar(30);
  Scalar alpha = Scalar(10);
  Scalar beta = Scalar(0.5);
  Matrix4<Scalar> gamma_d = Matrix4<Scalar>::Identity() * Scalar(200);
  Matrix3<Scalar> gamma_k = Matrix3<Scalar>::Identity() * Scalar(300);
  /// Only used by kCtrlIPerformance.
  Scalar lambda_c = Scalar(10);
  /// Optional epsilon*I added to the estimated-inertia gain. Zero keeps the
  /// gain exactly lambda_c * M_hat.
  Scalar inertia_floor = Scalar(0);
};

/// Axis-aligned box that keeps the estimated Jacobian away from singularity.
template <typename Scalar>
struct ProjectionBox {
  KinParams<Scalar> lower = KinParams<Scalar>(Scalar(0.5), Scalar(0.5), Scalar(0.1));
  KinParams<Scalar> upper = KinParams<Scalar>(Scalar(6.0), Scalar(6.0), Scalar(3.0));

  bool contains(const KinParams<Scalar>& a) const {
    return (a.array() >= lower.array()).all() && (a.array() <= upper.array()).all();
  }
};

template <typename Scalar>
struct SensorSample {
  Vector2<Scalar> q = Vector2<Scalar>::Zero();
  Vector2<Scalar> dq = Vector2<Scalar>::Zero();
  Vector2<Scalar> x = Vector2<Scalar>::Zero();
  Vector2<Scalar> dx = Vector2<Scalar>::Zero();
  Vector2<Scalar> x_d = Vector2<Scalar>::Zero();
  Vector2<Scalar> dx_d = Vector2<Scalar>::Zero();
  Vector2<Scalar> ddx_d = Vector2<Scalar>::Zero();

  Vector2<Scalar> position_error() const { return x - x_d; }
  Vector2<Scalar> velocity_error() const { return dx - dx_d; }
};

template <typename Scalar>
struct ControllerMemory {
  KinParams<Scalar> a_k_hat = KinParams<Scalar>::Zero();
  DynParams<Scalar> a_d_hat = DynParams<Scalar>::Zero();
  ControllerMode mode = ControllerMode::kCtrlI;
};

template <typename Scalar>
struct ControlOutput {
  Vector2<Scalar> tau = Vector2<Scalar>::Zero();
  Vector2<Scalar> qr_dot = Vector2<Scalar>::Zero();
  Vector2<Scalar> qr_ddot = Vector2<Scalar>::Zero();
  Vector2<Scalar> s = Vector2<Scalar>::Zero();
  KinParams<Scalar> a_k_hat_dot = KinParams<Scalar>::Zero();
  DynParams<Scalar> a_d_hat_dot = DynParams<Scalar>::Zero();
  Scalar jhat_condition = Scalar(1);
};

template <typename Scalar>
struct ControllerOptions {
  ModelOptions<Scalar> model{};
  Scalar condition_limit = Scalar(kDefaultConditionLimit);
};

template <typename Scalar>
struct ReferenceVelocity {
  Vector2<Scalar> qr_dot;
  Vector2<Scalar> xr_dot;
};

/// Inverse-Jacobian reference: qr_dot = Jhat^{-1} (dx_d - alpha dx_err).
template <typename Scalar>
ReferenceVelocity<Scalar> ctrl1_reference(const SensorSample<Scalar>& sample,
                                          const KinParams<Scalar>& a_k_hat, Scalar alpha,
                                          Scalar condition_limit = Scalar(kDefaultConditionLimit)) {
  const Matrix2<Scalar> jhat_inv =
      checked_inverse(jacobian(sample.q, a_k_hat), condition_limit, "estimated Jacobian");
  const Vector2<Scalar> xr_dot = sample.dx_d - alpha * sample.position_error();
  return {jhat_inv * xr_dot, xr_dot};
}

/// Time derivative of ctrl1_reference: Jhat^{-1} (ddx_r - dJhat qr_dot).
template <typename Scalar>
Vector2<Scalar> ctrl1_reference_accel(const SensorSample<Scalar>& sample,
                                      const KinParams<Scalar>& a_k_hat,
                                      const KinParams<Scalar>& a_k_hat_dot,
                                      const Vector2<Scalar>& qr_dot, Scalar alpha,
                                      Scalar condition_limit = Scalar(kDefaultConditionLimit)) {
  const Matrix2<Scalar> jhat_inv =
      checked_inverse(jacobian(sample.q, a_k_hat), condition_limit, "estimated Jacobian");
  const Matrix2<Scalar> jhat_dot = jacobian_rate(sample.q, sample.dq, a_k_hat, a_k_hat_dot);
  const Vector2<Scalar> xr_ddot = sample.ddx_d - alpha * sample.velocity_error();
  return jhat_inv * (xr_ddot - jhat_dot * qr_dot);
}

/// Transpose-error reference: qr_dot = Jhat^{-1} dx_d - alpha Jhat^T dx_err.
template <typename Scalar>
Vector2<Scalar> ctrl2_reference(const SensorSample<Scalar>& sample,
                                const KinParams<Scalar>& a_k_hat, Scalar alpha,
                                Scalar condition_limit = Scalar(kDefaultConditionLimit)) {
  const Matrix2<Scalar> jhat = jacobian(sample.q, a_k_hat);
  const Matrix2<Scalar> jhat_inv = checked_inverse(jhat, condition_limit, "estimated Jacobian");
  return jhat_inv * sample.dx_d - alpha * jhat.transpose() * sample.position_error();
}

/// Analytic derivative of ctrl2_reference:
///   -Jhat^{-1} dJhat Jhat^{-1} dx_d + Jhat^{-1} ddx_d - alpha (dJhat^T dx_err + Jhat^T ddx_err)
template <typename Scalar>
Vector2<Scalar> ctrl2_reference_accel(const SensorSample<Scalar>& sample,
                                      const KinParams<Scalar>& a_k_hat,
                                      const KinParams<Scalar>& a_k_hat_dot, Scalar alpha,
                                      Scalar condition_limit = Scalar(kDefaultConditionLimit)) {
  const Matrix2<Scalar> jhat = jacobian(sample.q, a_k_hat);
  const Matrix2<Scalar> jhat_inv = checked_inverse(jhat, condition_limit, "estimated Jacobian");
  const Matrix2<Scalar> jhat_dot = jacobian_rate(sample.q, sample.dq, a_k_hat, a_k_hat_dot);
  return -jhat_inv * jhat_dot * jhat_inv * sample.dx_d + jhat_inv * sample.ddx_d -
         alpha * (jhat_dot.transpose() * sample.position_error() +
                  jhat.transpose() * sample.velocity_error());
}

/// tau = -K_eff s + Y_d(q, dq, qr_dot, qr_ddot) a_d_hat.
template <typename Scalar>
Vector2<Scalar> control_torque(const SensorSample<Scalar>& sample, const Vector2<Scalar>& qr_dot,
                               const Vector2<Scalar>& qr_ddot, const DynParams<Scalar>& a_d_hat,
                               const Matrix2<Scalar>& K_eff,
                               const ModelOptions<Scalar>& model = {}) {
  const Vector2<Scalar> s = sample.dq - qr_dot;
  return -K_eff * s + dyn_regressor(sample.q, sample.dq, qr_dot, qr_ddot, model) * a_d_hat;
}

/// Approximate transpose-Jacobian feedback: tau = -Jhat^T K Jhat s + Y_d a_d_hat.
template <typename Scalar>
Vector2<Scalar> transpose_control_torque(const SensorSample<Scalar>& sample,
                                         const Vector2<Scalar>& qr_dot,
                                         const Vector2<Scalar>& qr_ddot,
                                         const DynParams<Scalar>& a_d_hat,
                                         const Matrix2<Scalar>& K,
                                         const KinParams<Scalar>& a_k_hat,
                                         const ModelOptions<Scalar>& model = {}) {
  const Matrix2<Scalar> jhat = jacobian(sample.q, a_k_hat);
  return control_torque(sample, qr_dot, qr_ddot, a_d_hat,
                        Matrix2<Scalar>(jhat.transpose() * K * jhat), model);
}

/// a_d_hat_dot = -Gamma_d Y_d^T(q, dq, qr_dot, qr_ddot_for_regressor) s.
template <typename Scalar>
DynParams<Scalar> adapt_dynamic(const SensorSample<Scalar>& sample, const Vector2<Scalar>& qr_dot,
                                const Vector2<Scalar>& qr_ddot_for_regressor,
                                const Vector2<Scalar>& s, const Matrix4<Scalar>& gamma_d,
                                const ModelOptions<Scalar>& model = {}) {
  return -gamma_d *
         (dyn_regressor(sample.q, sample.dq, qr_dot, qr_ddot_for_regressor, model).transpose() * s);
}

/// Direct kinematic law on the reference-velocity regressor:
/// a_k_hat_dot = Gamma_k Y_k^T(q, qr_dot) ((beta / alpha) ddx_err + dx_err).
template <typename Scalar>
KinParams<Scalar> adapt_kinematic_I(const SensorSample<Scalar>& sample,
                                    const Vector2<Scalar>& qr_dot,
                                    const Matrix3<Scalar>& gamma_k, Scalar alpha, Scalar beta) {
  const Vector2<Scalar> error = (beta / alpha) * sample.velocity_error() + sample.position_error();
  return gamma_k * (kin_regressor(sample.q, qr_dot).transpose() * error);
}

/// a_k_hat_dot = Gamma_k Y_k^T(q, dq) dx_err. Note the measured joint velocity.
template <typename Scalar>
KinParams<Scalar> adapt_kinematic_II(const SensorSample<Scalar>& sample,
                                     const Matrix3<Scalar>& gamma_k) {
  return gamma_k * (kin_regressor(sample.q, sample.dq).transpose() * sample.position_error());
}

/// Kinematic law of the transpose-Jacobian baseline: same error signal as
/// adapt_kinematic_I, regressor evaluated at the measured joint velocity.
template <typename Scalar>
KinParams<Scalar> adapt_kinematic_transpose(const SensorSample<Scalar>& sample,
                                            const Matrix3<Scalar>& gamma_k, Scalar alpha,
                                            Scalar beta) {
  const Vector2<Scalar> error = (beta / alpha) * sample.velocity_error() + sample.position_error();
  return gamma_k * (kin_regressor(sample.q, sample.dq).transpose() * error);
}

template <typename Scalar>
KinParams<Scalar> project_kinematic(const KinParams<Scalar>& candidate,
                                    const ProjectionBox<Scalar>& box) {
  return candidate.cwiseMax(box.lower).cwiseMin(box.upper);
}

/// K_eff = lambda_c M_hat(q) (+ floor I). Not necessarily positive definite
/// while a_d_hat is far from the truth.
template <typename Scalar>
Matrix2<Scalar> perf_gain(const Vector2<Scalar>& q, const DynParams<Scalar>& a_d_hat,
                          Scalar lambda_c, Scalar floor = Scalar(0)) {
  return lambda_c * inertia(q, a_d_hat) + floor * Matrix2<Scalar>::Identity();
}

/// Joint velocity command for an external joint servo (kinematic-only schemes).
template <typename Scalar>
Vector2<Scalar> velocity_command(const SensorSample<Scalar>& sample,
                                 const ControllerMemory<Scalar>& memory,
                                 const Gains<Scalar>& gains,
                                 Scalar condition_limit = Scalar(kDefaultConditionLimit)) {
  if (uses_transpose_reference(memory.mode)) {
    return ctrl2_reference(sample, memory.a_k_hat, gains.alpha, condition_limit);
  }
  return ctrl1_reference(sample, memory.a_k_hat, gains.alpha, condition_limit).qr_dot;
}

/// Evaluates the full control law of `memory.mode` for one sample. The
/// adaptation rates are the continuous-law values at this instant; the
/// estimated-Jacobian rate inside qr_ddot uses the same a_k_hat_dot.
template <typename Scalar>
ControlOutput<Scalar> evaluate_controller(const SensorSample<Scalar>& sample,
                                          const ControllerMemory<Scalar>& memory,
                                          const Gains<Scalar>& gains,
                                          const ControllerOptions<Scalar>& opts = {}) {
  ControlOutput<Scalar> out;
  const auto& model = opts.model;
  const Scalar limit = opts.condition_limit;
  out.jhat_condition = condition_number(jacobian(sample.q, memory.a_k_hat));

  switch (memory.mode) {
    case ControllerMode::kCtrlI:
    case ControllerMode::kCtrlIPerformance:
    case ControllerMode::kTransposeBaseline:
    case ControllerMode::kVelocityCommandI:
      out.qr_dot = ctrl1_reference(sample, memory.a_k_hat, gains.alpha, limit).qr_dot;
      out.a_k_hat_dot =
          memory.mode == ControllerMode::kTransposeBaseline
              ? adapt_kinematic_transpose(sample, gains.gamma_k, gains.alpha, gains.beta)
              : adapt_kinematic_I(sample, out.qr_dot, gains.gamma_k, gains.alpha, gains.beta);
      out.qr_ddot = ctrl1_reference_accel(sample, memory.a_k_hat, out.a_k_hat_dot, out.qr_dot,
                                          gains.alpha, limit);
      break;
    case ControllerMode::kCtrlII:
    case ControllerMode::kVelocityCommandII:
      out.qr_dot = ctrl2_reference(sample, memory.a_k_hat, gains.alpha, limit);
      out.a_k_hat_dot = adapt_kinematic_II(sample, gains.gamma_k);
      out.qr_ddot =
          ctrl2_reference_accel(sample, memory.a_k_hat, out.a_k_hat_dot, gains.alpha, limit);
      break;
  }
  out.s = sample.dq - out.qr_dot;

  switch (memory.mode) {
    case ControllerMode::kCtrlI:
    case ControllerMode::kCtrlII:
      out.tau = control_torque(sample, out.qr_dot, out.qr_ddot, memory.a_d_hat, gains.K, model);
      out.a_d_hat_dot =
          adapt_dynamic(sample, out.qr_dot, out.qr_ddot, out.s, gains.gamma_d, model);
      break;
    case ControllerMode::kCtrlIPerformance: {
      const Matrix2<Scalar> K_eff =
          perf_gain(sample.q, memory.a_d_hat, gains.lambda_c, gains.inertia_floor);
      out.tau = control_torque(sample, out.qr_dot, out.qr_ddot, memory.a_d_hat, K_eff, model);
      const Vector2<Scalar> qr_ddot_star = out.qr_ddot - gains.lambda_c * out.s;
      out.a_d_hat_dot =
          adapt_dynamic(sample, out.qr_dot, qr_ddot_star, out.s, gains.gamma_d, model);
      break;
    }
    case ControllerMode::kTransposeBaseline:
      out.tau = transpose_control_torque(sample, out.qr_dot, out.qr_ddot, memory.a_d_hat, gains.K,
                                         memory.a_k_hat, model);
      out.a_d_hat_dot =
          adapt_dynamic(sample, out.qr_dot, out.qr_ddot, out.s, gains.gamma_d, model);
      break;
    case ControllerMode::kVelocityCommandI:
    case ControllerMode::kVelocityCommandII:
      break;
  }
  return out;
}

}  // namespace ajac

#endif  // AJAC_CONTROLLERS_HPP_
