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

#include "ajac/properties.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "ajac/controllers.hpp"
#include "ajac/integrator.hpp"
#include "ajac/lyapunov.hpp"

namespace ajac {
namespace {

using Eigen::Vector2d;

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  Vector2d angles() { return {uniform(-std::numbers::pi, std::numbers::pi), uniform(-std::numbers::pi, std::numbers::pi)}; }
  Vector2d rates(double bound = 3.0) { return {uniform(-bound, bound), uniform(-bound, bound)}; }

  KinParams<double> kinematic() { return {uniform(0.5, 6.0), uniform(0.5, 6.0), uniform(0.1, 3.0)}; }

  // Rejection-sampled so that M(q) is positive definite everywhere.
  DynParams<double> dynamic() {
    for (;;) {
      DynParams<double> a(uniform(1.0, 30.0), uniform(0.5, 10.0), uniform(-5.0, 5.0),
                          uniform(-10.0, 10.0));
      if (min_inertia_eigenvalue(a) > 0.05) return a;
    }
  }

 private:
  std::mt19937_64 rng_;
};

struct Tracker {
  PropertyResult result;

  Tracker(std::string name, double tolerance) {
    result.name = std::move(name);
    result.tolerance = tolerance;
    result.passed = true;
  }

  void observe(double residual) {
    ++result.samples;
    if (!std::isfinite(residual)) residual = std::numeric_limits<double>::infinity();
    result.max_residual = std::max(result.max_residual, residual);
    if (!(residual < result.tolerance)) result.passed = false;
  }
};

// dM/dt along dq by the complex step, exact to round-off.
Matrix2<double> inertia_rate(const Vector2d& q, const Vector2d& dq, const DynParams<double>& a_d) {
  using C = std::complex<double>;
  constexpr double h = 1e-30;
  const Vector2<C> qc = q.cast<C>() + C(0.0, h) * dq.cast<C>();
  return inertia<C>(qc, a_d.cast<C>()).imag() / h;
}

double observed_rk4_order() {
  // y'' = -y; exact solution cos t.
  auto f = [](double, const Eigen::Vector2d& y) { return Eigen::Vector2d(y(1), -y(0)); };
  auto error = [&](int n) {
    const double h = 2.0 / n;
    Eigen::Vector2d y(1.0, 0.0);
    for (int i = 0; i < n; ++i) y = rk4_step(f, i * h, y, h);
    return std::abs(y(0) - std::cos(2.0));
  };
  return std::log2(error(20) / error(40));
}

}  // namespace

std::vector<PropertyResult> run_property_suite(const PropertyOptions& options) {
  Sampler rng(options.seed);
  const int n = options.samples;
  const auto& hooks = options.hooks;

  Tracker kin("kinematic regressor: Y_k a_k = J xi", 1e-12);
  Tracker dyn("dynamic regressor: Y_d a_d = M dzeta + C zeta + g", 1e-9);
  Tracker skew("skew symmetry: v'(dM/dt - 2C)v = 0", 1e-8);
  Tracker jac("Jacobian vs central differences (relative)", 1e-6);
  Tracker jdot("Jacobian rate vs central differences (relative)", 1e-6);
  Tracker grav("gravity = grad of potential (relative)", 1e-6);
  Tracker loop("closed-loop identity residual", 1e-9);

  for (int i = 0; i < n; ++i) {
    const Vector2d q = rng.angles();
    const Vector2d dq = rng.rates();
    const Vector2d xi = rng.rates();
    const KinParams<double> a_k = rng.kinematic();
    const DynParams<double> a_d = rng.dynamic();

    kin.observe((hooks.kin_regressor(q, xi) * a_k - jacobian(q, a_k) * xi).norm());

    const Vector2d zeta = rng.rates();
    const Vector2d dzeta = rng.rates(10.0);
    const Vector2d rhs = inertia(q, a_d) * dzeta + coriolis(q, dq, a_d) * zeta + gravity(q, a_d);
    dyn.observe((hooks.dyn_regressor(q, dq, zeta, dzeta) * a_d - rhs).norm());

    const Vector2d v = rng.rates();
    skew.observe(std::abs(v.dot((inertia_rate(q, dq, a_d) - 2.0 * coriolis(q, dq, a_d)) * v)));

    constexpr double h = 1e-6;
    Matrix2<double> fd;
    for (int j = 0; j < 2; ++j) {
      const Vector2d e = h * Vector2d::Unit(j);
      fd.col(j) = (forward_kinematics<double>(q + e, a_k) - forward_kinematics<double>(q - e, a_k)) /
                  (2 * h);
    }
    const Matrix2<double> J = jacobian(q, a_k);
    jac.observe((fd - J).norm() / std::max(J.norm(), 1.0));

    const KinParams<double> da_k = KinParams<double>(rng.uniform(-1, 1), rng.uniform(-1, 1),
                                                     rng.uniform(-1, 1));
    const Matrix2<double> jd_fd =
        (jacobian<double>(q + h * dq, a_k + h * da_k) - jacobian<double>(q - h * dq, a_k - h * da_k)) /
        (2 * h);
    const Matrix2<double> jd = jacobian_rate(q, dq, a_k, da_k);
    jdot.observe((jd_fd - jd).norm() / std::max(jd.norm(), 1.0));

    Vector2d grad;
    for (int j = 0; j < 2; ++j) {
      const Vector2d e = h * Vector2d::Unit(j);
      grad(j) = (potential_energy<double>(q + e, a_d) - potential_energy<double>(q - e, a_d)) / (2 * h);
    }
    const Vector2d g = gravity(q, a_d);
    grav.observe((grad - g).norm() / std::max(g.norm(), 1.0));

    // Both reference-velocity families satisfy their closed-loop identity
    // pointwise, for any estimate.
    SensorSample<double> sample;
    sample.q = q;
    sample.dq = dq;
    sample.x = forward_kinematics(q, a_k);
    sample.dx = J * dq;
    sample.x_d = sample.x + Vector2d(rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2));
    sample.dx_d = rng.rates(1.0);
    const KinParams<double> a_k_hat = rng.kinematic();
    const double alpha = rng.uniform(0.5, 20.0);
    if (condition_number(jacobian(q, a_k_hat)) < 1e4) {
      const Vector2d qr1 = ctrl1_reference(sample, a_k_hat, alpha).qr_dot;
      loop.observe(closed_loop_residual(ControllerMode::kCtrlI, sample, qr1, a_k, a_k_hat, alpha)
                       .norm() /
                   std::max(1.0, qr1.norm()));
      const Vector2d qr2 = ctrl2_reference(sample, a_k_hat, alpha);
      loop.observe(closed_loop_residual(ControllerMode::kCtrlII, sample, qr2, a_k, a_k_hat, alpha)
                       .norm() /
                   std::max(1.0, qr2.norm()));
    }
  }

  Tracker order("RK4 observed order >= 3.5", 0.0);
  const double p = observed_rk4_order();
  order.result.samples = 1;
  order.result.max_residual = p;
  order.result.tolerance = 3.5;
  order.result.passed = p >= 3.5;

  return {kin.result, dyn.result, skew.result, jac.result, jdot.result,
          grav.result, loop.result, order.result};
}

bool all_passed(const std::vector<PropertyResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
}

}  // namespace ajac
