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

// Closed-form kinematics and dynamics of a two-link revolute planar arm that
// grasps a tool of unknown geometry, together with the regressors that make
// both models linear in their parameters:
//
//   jacobian(q, a_k) * xi                    == kin_regressor(q, xi) * a_k
//   M(q) dzeta + C(q, dq) zeta + g(q)       == dyn_regressor(q, dq, zeta, dzeta) * a_d
//
// Inertial layout (c2 = cos q2, s2 = sin q2):
//   M11 = th1 + 2 th3 c2,  M12 = M21 = th2 + th3 c2,  M22 = th2
//   C   = [[-th3 s2 dq2, -th3 s2 (dq1 + dq2)], [th3 s2 dq1, 0]]
//   g1  = th4 g0 c1 + (th3 / l1_ref) g0 c12,  g2 = (th3 / l1_ref) g0 c12
//
// Every function is templated on the scalar so the same code serves double
// simulation and extended-precision oracles.

#ifndef AJAC_MODEL_HPP_
#define AJAC_MODEL_HPP_

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "ajac/errors.hpp"
#include "ajac/types.hpp"

namespace ajac {

template <typename Scalar>
struct ModelOptions {
  /// Gravitational acceleration; zero disables gravity.
  Scalar gravity = Scalar(9.81);
  /// Fixed link-1 length of the parameterization. Not a parameter estimate.
  Scalar l1_ref = Scalar(2.0);
};

inline constexpr double kDefaultConditionLimit = 1e8;

namespace detail {

template <typename Scalar>
struct Trig {
  explicit Trig(const Vector2<Scalar>& q)
      : c1(std::cos(q(0))),
        s1(std::sin(q(0))),
        c2(std::cos(q(1))),
        s2(std::sin(q(1))),
        c12(std::cos(q(0) + q(1))),
        s12(std::sin(q(0) + q(1))) {}
  Scalar c1, s1, c2, s2, c12, s12;
};

}  // namespace detail

/// Ratio of extreme singular values; +inf for an exactly singular matrix.
template <typename Derived>
typename Derived::Scalar condition_number(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  Eigen::JacobiSVD<typename Derived::PlainObject> svd(m.eval());
  const auto& sv = svd.singularValues();
  const Scalar smallest = sv(sv.size() - 1);
  if (!(smallest > Scalar(0))) return std::numeric_limits<Scalar>::infinity();
  return sv(0) / smallest;
}

/// Inverse of a 2x2 matrix, refusing anything with condition number above `limit`.
template <typename Scalar>
Matrix2<Scalar> checked_inverse(const Matrix2<Scalar>& m, Scalar limit, const char* what) {
  const Scalar cond = condition_number(m);
  if (!(cond <= limit)) {
    throw SingularityError(std::string(what) + " is numerically singular (condition number " +
                               std::to_string(static_cast<double>(cond)) + ")",
                           static_cast<double>(cond));
  }
  return m.inverse();
}

template <typename Scalar>
Vector2<Scalar> forward_kinematics(const Vector2<Scalar>& q, const KinParams<Scalar>& a_k) {
  const detail::Trig<Scalar> t(q);
  const Scalar l1 = a_k(0), a = a_k(1), b = a_k(2);
  return Vector2<Scalar>(l1 * t.c1 + a * t.c12 - b * t.s12, l1 * t.s1 + a * t.s12 + b * t.c12);
}

template <typename Scalar>
Matrix2<Scalar> jacobian(const Vector2<Scalar>& q, const KinParams<Scalar>& a_k) {
  const detail::Trig<Scalar> t(q);
  const Scalar l1 = a_k(0), a = a_k(1), b = a_k(2);
  const Scalar px = a * t.c12 - b * t.s12;  // tool offset, base frame
  const Scalar py = a * t.s12 + b * t.c12;
  Matrix2<Scalar> J;
  J << -l1 * t.s1 - py, -py,
        l1 * t.c1 + px,  px;
  return J;
}

/// Partial derivatives dJ/dq1 and dJ/dq2.
template <typename Scalar>
std::array<Matrix2<Scalar>, 2> jacobian_partials(const Vector2<Scalar>& q,
                                                 const KinParams<Scalar>& a_k) {
  const detail::Trig<Scalar> t(q);
  const Scalar l1 = a_k(0), a = a_k(1), b = a_k(2);
  const Scalar px = a * t.c12 - b * t.s12;
  const Scalar py = a * t.s12 + b * t.c12;
  Matrix2<Scalar> d1, d2;
  d1 << -l1 * t.c1 - px, -px,
        -l1 * t.s1 - py, -py;
  d2 << -px, -px,
        -py, -py;
  return {d1, d2};
}

/// d/dt J(q; a_k) along (dq, da_k). J is linear in a_k, so the parameter
/// contribution is the Jacobian structure evaluated at the rate itself.
template <typename Scalar>
Matrix2<Scalar> jacobian_rate(const Vector2<Scalar>& q, const Vector2<Scalar>& dq,
                              const KinParams<Scalar>& a_k, const KinParams<Scalar>& da_k) {
  const auto partials = jacobian_partials(q, a_k);
  return partials[0] * dq(0) + partials[1] * dq(1) + jacobian(q, da_k);
}

/// Y_k(q, xi) with J(q; a_k) xi == Y_k(q, xi) a_k for every a_k.
template <typename Scalar>
KinRegressor<Scalar> kin_regressor(const Vector2<Scalar>& q, const Vector2<Scalar>& xi) {
  const detail::Trig<Scalar> t(q);
  const Scalar sum = xi(0) + xi(1);
  KinRegressor<Scalar> Y;
  Y << -t.s1 * xi(0), -t.s12 * sum, -t.c12 * sum,
        t.c1 * xi(0),  t.c12 * sum, -t.s12 * sum;
  return Y;
}

/// Closed-form inverse kinematics. `elbow` selects the sign of the elbow
/// branch (+1 gives the branch with the larger q2).
template <typename Scalar>
Vector2<Scalar> inverse_kinematics(const Vector2<Scalar>& x, const KinParams<Scalar>& a_k,
                                   int elbow = 1) {
  const Scalar l1 = a_k(0), a = a_k(1), b = a_k(2);
  const Scalar rho = std::hypot(a, b);
  const Scalar phi = std::atan2(b, a);
  const Scalar cos_arg = (x.squaredNorm() - l1 * l1 - rho * rho) / (Scalar(2) * l1 * rho);
  if (cos_arg > Scalar(1) || cos_arg < Scalar(-1)) {
    throw std::domain_error("inverse_kinematics: target outside the reachable annulus");
  }
  const Scalar q2 = (elbow >= 0 ? Scalar(1) : Scalar(-1)) * std::acos(cos_arg) - phi;
  const Scalar c2 = std::cos(q2), s2 = std::sin(q2);
  const Scalar q1 = std::atan2(x(1), x(0)) - std::atan2(a * s2 + b * c2, l1 + a * c2 - b * s2);
  return Vector2<Scalar>(q1, q2);
}

template <typename Scalar>
Matrix2<Scalar> inertia(const Vector2<Scalar>& q, const DynParams<Scalar>& a_d) {
  const Scalar c2 = std::cos(q(1));
  const Scalar m12 = a_d(1) + a_d(2) * c2;
  Matrix2<Scalar> M;
  M << a_d(0) + Scalar(2) * a_d(2) * c2, m12,
       m12, a_d(1);
  return M;
}

/// Christoffel-consistent Coriolis/centrifugal matrix: dM/dt - 2C is skew-symmetric.
template <typename Scalar>
Matrix2<Scalar> coriolis(const Vector2<Scalar>& q, const Vector2<Scalar>& dq,
                         const DynParams<Scalar>& a_d) {
  const Scalar h = -a_d(2) * std::sin(q(1));
  Matrix2<Scalar> C;
  C << h * dq(1), h * (dq(0) + dq(1)),
      -h * dq(0), Scalar(0);
  return C;
}

template <typename Scalar>
Vector2<Scalar> gravity(const Vector2<Scalar>& q, const DynParams<Scalar>& a_d,
                        const ModelOptions<Scalar>& opts = {}) {
  const detail::Trig<Scalar> t(q);
  const Scalar link2 = a_d(2) / opts.l1_ref * opts.gravity * t.c12;
  return Vector2<Scalar>(a_d(3) * opts.gravity * t.c1 + link2, link2);
}

/// Potential whose gradient is gravity(q, a_d).
template <typename Scalar>
Scalar potential_energy(const Vector2<Scalar>& q, const DynParams<Scalar>& a_d,
                        const ModelOptions<Scalar>& opts = {}) {
  const detail::Trig<Scalar> t(q);
  return opts.gravity * (a_d(3) * t.s1 + a_d(2) / opts.l1_ref * t.s12);
}

template <typename Scalar>
Scalar kinetic_energy(const Vector2<Scalar>& q, const Vector2<Scalar>& dq,
                      const DynParams<Scalar>& a_d) {
  return Scalar(0.5) * dq.dot(inertia(q, a_d) * dq);
}

/// Y_d(q, dq, zeta, dzeta) with M dzeta + C zeta + g == Y_d a_d for every a_d.
template <typename Scalar>
DynRegressor<Scalar> dyn_regressor(const Vector2<Scalar>& q, const Vector2<Scalar>& dq,
                                   const Vector2<Scalar>& zeta, const Vector2<Scalar>& dzeta,
                                   const ModelOptions<Scalar>& opts = {}) {
  const detail::Trig<Scalar> t(q);
  const Scalar g_link2 = opts.gravity * t.c12 / opts.l1_ref;
  DynRegressor<Scalar> Y;
  Y(0, 0) = dzeta(0);
  Y(0, 1) = dzeta(1);
  Y(0, 2) = t.c2 * (Scalar(2) * dzeta(0) + dzeta(1)) -
            t.s2 * (dq(1) * zeta(0) + (dq(0) + dq(1)) * zeta(1)) + g_link2;
  Y(0, 3) = opts.gravity * t.c1;
  Y(1, 0) = Scalar(0);
  Y(1, 1) = dzeta(0) + dzeta(1);
  Y(1, 2) = t.c2 * dzeta(0) + t.s2 * dq(0) * zeta(0) + g_link2;
  Y(1, 3) = Scalar(0);
  return Y;
}

/// Joint acceleration M^{-1} (tau - C dq - g). Throws SingularityError when M
/// is ill-conditioned beyond `condition_limit`.
template <typename Scalar>
Vector2<Scalar> forward_dynamics(const Vector2<Scalar>& q, const Vector2<Scalar>& dq,
                                 const Vector2<Scalar>& tau, const DynParams<Scalar>& a_d,
                                 const ModelOptions<Scalar>& opts = {},
                                 Scalar condition_limit = Scalar(kDefaultConditionLimit)) {
  const Matrix2<Scalar> M = inertia(q, a_d);
  const Scalar cond = condition_number(M);
  if (!(cond <= condition_limit)) {
    throw SingularityError("inertia matrix is numerically singular", static_cast<double>(cond));
  }
  return M.ldlt().solve(tau - coriolis(q, dq, a_d) * dq - gravity(q, a_d, opts));
}

/// Smallest eigenvalue of M(q) over all configurations. M is affine in
/// cos(q2), so its smallest eigenvalue is concave in cos(q2) and the minimum
/// sits at q2 = 0 or q2 = pi.
template <typename Scalar>
Scalar min_inertia_eigenvalue(const DynParams<Scalar>& a_d) {
  Scalar lowest = std::numeric_limits<Scalar>::infinity();
  for (const Scalar q2 : {Scalar(0), std::numbers::pi_v<Scalar>}) {
    const Matrix2<Scalar> M = inertia(Vector2<Scalar>(Scalar(0), q2), a_d);
    Eigen::SelfAdjointEigenSolver<Matrix2<Scalar>> es(M, Eigen::EigenvaluesOnly);
    lowest = std::min(lowest, es.eigenvalues()(0));
  }
  return lowest;
}

}  // namespace ajac

#endif  // AJAC_MODEL_HPP_
