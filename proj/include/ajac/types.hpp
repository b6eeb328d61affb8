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

#ifndef AJAC_TYPES_HPP_
#define AJAC_TYPES_HPP_

#include <Eigen/Core>

namespace ajac {

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;
template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar>
using Matrix4 = Eigen::Matrix<Scalar, 4, 4>;

/// Kinematic parameters [l1, a, b]: link-1 length and the in-plane tool-tip
/// offsets expressed in the link-2 frame (m).
template <typename Scalar>
using KinParams = Eigen::Matrix<Scalar, 3, 1>;

/// Grouped inertial parameters [theta1, theta2, theta3, theta4].
template <typename Scalar>
using DynParams = Eigen::Matrix<Scalar, 4, 1>;

template <typename Scalar>
using KinRegressor = Eigen::Matrix<Scalar, 2, 3>;
template <typename Scalar>
using DynRegressor = Eigen::Matrix<Scalar, 2, 4>;

template <typename Scalar>
struct JointState {
  Vector2<Scalar> q = Vector2<Scalar>::Zero();
  Vector2<Scalar> dq = Vector2<Scalar>::Zero();
};

template <typename Scalar>
struct TaskState {
  Vector2<Scalar> x = Vector2<Scalar>::Zero();
  Vector2<Scalar> dx = Vector2<Scalar>::Zero();
};

}  // namespace ajac

#endif  // AJAC_TYPES_HPP_
