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

#ifndef AJAC_INTEGRATOR_HPP_
#define AJAC_INTEGRATOR_HPP_

#include <Eigen/Core>

namespace ajac {

/// One classical fourth-order Runge-Kutta step of dy/dt = f(t, y).
template <typename Derived, typename Rhs>
typename Derived::PlainObject rk4_step(Rhs&& f, double t, const Eigen::MatrixBase<Derived>& y,
                                       double h) {
  using State = typename Derived::PlainObject;
  const State k1 = f(t, State(y));
  const State k2 = f(t + 0.5 * h, State(y + 0.5 * h * k1));
  const State k3 = f(t + 0.5 * h, State(y + 0.5 * h * k2));
  const State k4 = f(t + h, State(y + h * k3));
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace ajac

#endif  // AJAC_INTEGRATOR_HPP_
