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

// Quantities monitored along closed-loop runs. The dynamic-loop function
//   V1 = 1/2 s^T M(q) s + 1/2 da_d^T Gamma_d^{-1} da_d
// is nonincreasing for every torque mode. The kinematic-loop functions carry
// a running dissipation integral:
//   V2  = (1 - beta)/2 |dx|^2 + 1/2 da_k^T Gamma_k^{-1} da_k + (l_M - int |J s|^2) / (2 alpha)
//   V2* =          1/2 |dx|^2 + 1/2 da_k^T Gamma_k^{-1} da_k + (l_M* - int |s|^2) / (2 alpha)
// The constants l_M, l_M* only shift the level; increments do not depend on them.

#ifndef AJAC_LYAPUNOV_HPP_
#define AJAC_LYAPUNOV_HPP_

#include "ajac/controllers.hpp"

namespace ajac {

enum class KinematicCertificate { kNone, kV2, kV2Star };

constexpr KinematicCertificate kinematic_certificate(ControllerMode mode) {
  switch (mode) {
    case ControllerMode::kCtrlI:
    case ControllerMode::kCtrlIPerformance:
    case ControllerMode::kVelocityCommandI:
      return KinematicCertificate::kV2;
    case ControllerMode::kCtrlII:
    case ControllerMode::kVelocityCommandII:
      return KinematicCertificate::kV2Star;
    case ControllerMode::kTransposeBaseline:
      return KinematicCertificate::kNone;
  }
  return KinematicCertificate::kNone;
}

template <typename Scalar>
Scalar lyapunov_v1(const Vector2<Scalar>& q, const Vector2<Scalar>& s,
                   const DynParams<Scalar>& a_d_true, const DynParams<Scalar>& a_d_hat,
                   const Matrix4<Scalar>& gamma_d) {
  const DynParams<Scalar> err = a_d_hat - a_d_true;
  return Scalar(0.5) * s.dot(inertia(q, a_d_true) * s) +
         Scalar(0.5) * err.dot(gamma_d.ldlt().solve(err));
}

/// State part of V2 (everything except the dissipation integral).
template <typename Scalar>
Scalar lyapunov_v2_state(const Vector2<Scalar>& dx_err, const KinParams<Scalar>& a_k_true,
                         const KinParams<Scalar>& a_k_hat, const Matrix3<Scalar>& gamma_k,
                         Scalar beta) {
  const KinParams<Scalar> err = a_k_hat - a_k_true;
  return Scalar(0.5) * (Scalar(1) - beta) * dx_err.squaredNorm() +
         Scalar(0.5) * err.dot(gamma_k.ldlt().solve(err));
}

/// State part of V2*.
template <typename Scalar>
Scalar lyapunov_v2star_state(const Vector2<Scalar>& dx_err, const KinParams<Scalar>& a_k_true,
                             const KinParams<Scalar>& a_k_hat, const Matrix3<Scalar>& gamma_k) {
  return lyapunov_v2_state(dx_err, a_k_true, a_k_hat, gamma_k, Scalar(0));
}

/// Upper bound on dV2/dt: -(alpha (1 - beta) / 2) |dx|^2 - (beta / (2 alpha)) |ddx + alpha dx|^2.
template <typename Scalar>
Scalar v2_rate_bound(const Vector2<Scalar>& dx_err, const Vector2<Scalar>& ddx_err, Scalar alpha,
                     Scalar beta) {
  return -alpha * (Scalar(1) - beta) / Scalar(2) * dx_err.squaredNorm() -
         beta / (Scalar(2) * alpha) * (ddx_err + alpha * dx_err).squaredNorm();
}

/// Residual of the task-space closed-loop identity for the reference velocity
/// of `mode`. Inverse-Jacobian reference:
///   ddx + alpha dx + Y_k(q, qr_dot) da_k - J(q) s
/// transpose-error reference:
///   ddx + alpha Jhat Jhat^T dx + Y_k(q, dq) da_k - Jhat(q) s
template <typename Scalar>
Vector2<Scalar> closed_loop_residual(ControllerMode mode, const SensorSample<Scalar>& sample,
                                     const Vector2<Scalar>& qr_dot,
                                     const KinParams<Scalar>& a_k_true,
                                     const KinParams<Scalar>& a_k_hat, Scalar alpha) {
  const KinParams<Scalar> err = a_k_hat - a_k_true;
  const Vector2<Scalar> s = sample.dq - qr_dot;
  const Vector2<Scalar> dx = sample.position_error();
  const Vector2<Scalar> ddx = sample.velocity_error();
  if (uses_transpose_reference(mode)) {
    const Matrix2<Scalar> jhat = jacobian(sample.q, a_k_hat);
    return ddx + alpha * jhat * (jhat.transpose() * dx) +
           kin_regressor(sample.q, sample.dq) * err - jhat * s;
  }
  return ddx + alpha * dx + kin_regressor(sample.q, qr_dot) * err -
         jacobian(sample.q, a_k_true) * s;
}

}  // namespace ajac

#endif  // AJAC_LYAPUNOV_HPP_
