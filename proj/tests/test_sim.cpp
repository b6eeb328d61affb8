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

#include "ajac/sim.hpp"

namespace ajac {
namespace {

using Eigen::Vector2d;

ExperimentConfig base_config() {
  ExperimentConfig c;
  c.a_d_true = DynParams<double>(29.7132, 8.6501, 7.1278, 9.412);
  c.q0 = initial_joint_position(c.trajectory, c.a_k_true, Vector2d(0.05, -0.05), 1);
  c.sampling = Sampling::kContinuous;
  c.t_end = 1.0;
  return c;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

template <typename Derived>
bool same_bits(const Eigen::MatrixBase<Derived>& a, const Eigen::MatrixBase<Derived>& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (!same_bits(a(i), b(i))) return false;
  }
  return true;
}

TEST(Trajectory, DerivativesMatchFiniteDifferences) {
  const DesiredTrajectory traj;
  constexpr double h = 1e-6;
  for (double t : {0.0, 0.3, 1.7, 4.2}) {
    const auto p = traj.at(t);
    EXPECT_NEAR((p.x - traj.center).norm(), traj.radius, 1e-15);
    EXPECT_NEAR(((traj.at(t + h).x - traj.at(t - h).x) / (2 * h) - p.dx).norm(), 0.0, 1e-8);
    EXPECT_NEAR(((traj.at(t + h).dx - traj.at(t - h).dx) / (2 * h) - p.ddx).norm(), 0.0, 1e-8);
  }
  // One revolution every 2 s.
  EXPECT_NEAR((traj.at(2.0).x - traj.at(0.0).x).norm(), 0.0, 1e-14);
}

TEST(Validate, AcceptsBaseConfig) {
  EXPECT_NO_THROW(validate(base_config()));
  EXPECT_EQ(plant_substeps(base_config()), 5);
}

TEST(Validate, RejectsBadConfigs) {
  auto expect_reject = [](auto mutate) {
    ExperimentConfig c = base_config();
    mutate(c);
    EXPECT_THROW(validate(c), ConfigError);
  };
  expect_reject([](ExperimentConfig& c) { c.dt_plant = 0.0007; });
  expect_reject([](ExperimentConfig& c) { c.dt_plant = 0.01; });
  expect_reject([](ExperimentConfig& c) { c.gains.beta = 1.5; });
  expect_reject([](ExperimentConfig& c) { c.gains.alpha = 0.0; });
  expect_reject([](ExperimentConfig& c) { c.gains.K(0, 1) = 5.0; });
  expect_reject([](ExperimentConfig& c) { c.gains.gamma_k(2, 2) = -1.0; });
  expect_reject([](ExperimentConfig& c) { c.a_d_true << 7.9628, -0.96, 19.2828, 10.1495; });
  expect_reject([](ExperimentConfig& c) { c.a_k_true(0) = 7.0; });
  expect_reject([](ExperimentConfig& c) { c.a_k_hat0(2) = 5.0; });
  expect_reject([](ExperimentConfig& c) { c.sensor_noise_pos = -1.0; });
  expect_reject([](ExperimentConfig& c) {
    c.mode = ControllerMode::kVelocityCommandI;
    c.servo_gain = 0.0;
  });
  expect_reject([](ExperimentConfig& c) { c.t_end = 0.0; });
}

TEST(InitialState, InverseKinematicsHitsOffsetTarget) {
  const ExperimentConfig c = base_config();
  EXPECT_NEAR((forward_kinematics(c.q0, c.a_k_true) - c.trajectory.at(0).x - Vector2d(0.05, -0.05))
                  .norm(), 0.0, 1e-12);
}

TEST(InitialState, MatchedVelocityZeroesSlidingVariable) {
  ExperimentConfig c = base_config();
  c.dq0 = matched_joint_velocity(c);
  c.t_end = 0.01;
  const SimLog log = run_experiment(c);
  ASSERT_TRUE(log.completed());
  EXPECT_NEAR(log.rows.front().s.norm(), 0.0, 1e-12);
}

TEST(Plant, HeldTorqueIntegrationMatchesFineReference) {
  const DynParams<double> a_d(29.7132, 8.6501, 7.1278, 9.412);
  const JointState<double> s0{Vector2d(0.3, 1.0), Vector2d(1.5, -2.0)};
  const Vector2d tau(20.0, -5.0);
  const JointState<double> coarse = integrate_plant(s0, tau, a_d, 1e-3, 5);
  const JointState<double> fine = integrate_plant(s0, tau, a_d, 1e-5, 500);
  EXPECT_LT((coarse.q - fine.q).norm(), 1e-8);
  EXPECT_LT((coarse.dq - fine.dq).norm(), 1e-8);
}

TEST(Plant, GravityCompensatedRestIsEquilibrium) {
  const DynParams<double> a_d(29.7132, 8.6501, 7.1278, 9.412);
  const JointState<double> s0{Vector2d(0.3, 1.0), Vector2d::Zero()};
  const JointState<double> s1 = integrate_plant(s0, gravity(s0.q, a_d), a_d, 1e-3, 100);
  EXPECT_LT((s1.q - s0.q).norm(), 1e-14);
  EXPECT_LT(s1.dq.norm(), 1e-13);
}

TEST(Plant, ServoTracksCommandedVelocity) {
  const DynParams<double> a_d(29.7132, 8.6501, 7.1278, 9.412);
  const Vector2d q(0.3, 1.0), dq(0.2, 0.1), cmd(0.5, -0.5);
  const Vector2d tau = joint_servo_step(q, dq, cmd, 1000.0, a_d);
  EXPECT_NEAR((tau - gravity(q, a_d) + 1000.0 * (dq - cmd)).norm(), 0.0, 1e-12);
}

TEST(Run, ZeroOrderHoldAppliesLoggedTorqueOverTheInterval) {
  ExperimentConfig c = base_config();
  c.sampling = Sampling::kZeroOrderHold;
  c.t_end = 0.2;
  const SimLog log = run_experiment(c);
  ASSERT_TRUE(log.completed());
  for (std::size_t k = 0; k + 1 < log.rows.size(); ++k) {
    const auto& r = log.rows[k];
    const JointState<double> next =
        integrate_plant({r.q, r.dq}, r.tau, c.a_d_true, c.dt_plant, plant_substeps(c));
    EXPECT_LT((next.q - log.rows[k + 1].q).norm(), 1e-13);
    EXPECT_LT((next.dq - log.rows[k + 1].dq).norm(), 1e-12);
  }
}

TEST(Run, ContinuousAndHeldSamplingAgreeAsTheTickShrinks) {
  ExperimentConfig c = base_config();
  c.t_end = 0.5;
  c.dt_plant = 2e-4;
  c.dt_control = 2e-4;
  const SimLog cont = run_experiment(c);
  c.sampling = Sampling::kZeroOrderHold;
  const SimLog zoh = run_experiment(c);
  ASSERT_TRUE(cont.completed() && zoh.completed());
  EXPECT_LT((cont.rows.back().q - zoh.rows.back().q).norm(), 1e-3);
}

TEST(Run, LogRowsAreConsistent) {
  const ExperimentConfig c = base_config();
  const SimLog log = run_experiment(c);
  ASSERT_TRUE(log.completed());
  ASSERT_EQ(log.rows.size(), 201u);
  for (const auto& r : log.rows) {
    EXPECT_NEAR((r.dx - jacobian(r.q, c.a_k_true) * r.dq).norm(), 0.0, 1e-12);
    EXPECT_NEAR((r.x - forward_kinematics(r.q, c.a_k_true)).norm(), 0.0, 1e-15);
    EXPECT_EQ(r.position_error, r.x - r.x_d);
    EXPECT_TRUE(c.box.contains(r.a_k_hat));
    EXPECT_LT(r.residual, 1e-9);
  }
  // int |s|^2: logged integral vs the trapezoid rule on logged s.
  double trapezoid = 0.0;
  for (std::size_t k = 1; k < log.rows.size(); ++k) {
    trapezoid += 0.5 * c.dt_control *
                 (log.rows[k].s.squaredNorm() + log.rows[k - 1].s.squaredNorm());
  }
  EXPECT_NEAR(log.rows.back().s_squared_integral, trapezoid, 1e-3 * trapezoid);
}

TEST(Run, IsBitwiseDeterministic) {
  ExperimentConfig c = base_config();
  c.sensor_noise_pos = 1e-4;
  c.sensor_noise_vel = 1e-3;
  const SimLog a = run_experiment(c), b = run_experiment(c);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    ASSERT_TRUE(same_bits(a.rows[k].q, b.rows[k].q));
    ASSERT_TRUE(same_bits(a.rows[k].tau, b.rows[k].tau));
    ASSERT_TRUE(same_bits(a.rows[k].a_d_hat, b.rows[k].a_d_hat));
    ASSERT_TRUE(same_bits(a.rows[k].v1, b.rows[k].v1));
  }
  c.seed = 2;
  const SimLog other = run_experiment(c);
  EXPECT_FALSE(same_bits(other.rows.back().q, a.rows.back().q));
}

TEST(Run, NoiseEntersMeasurementsOnly) {
  ExperimentConfig c = base_config();
  c.sensor_noise_pos = 1e-3;
  c.t_end = 0.05;
  const SimLog log = run_experiment(c);
  const auto& r = log.rows.front();
  EXPECT_GT((r.x - forward_kinematics(r.q, c.a_k_true)).norm(), 0.0);
  EXPECT_EQ(r.q, c.q0);
}

TEST(Run, DivergenceGuardStopsRun) {
  ExperimentConfig c = base_config();
  c.divergence_limit = 0.01;
  const SimLog log = run_experiment(c);
  EXPECT_EQ(log.termination, Termination::kDivergence);
  EXPECT_EQ(log.rows.size(), 1u);
  EXPECT_FALSE(log.message.empty());
}

TEST(Run, SingularEstimateAbortsWithDiagnostic) {
  ExperimentConfig c = base_config();
  c.condition_limit = condition_number(jacobian(c.q0, c.a_k_hat0)) * (1 + 1e-9);
  const SimLog log = run_experiment(c);
  EXPECT_EQ(log.termination, Termination::kSingularity);
  EXPECT_NE(log.message.find("singular"), std::string::npos);
}

TEST(Run, CertaintyEquivalenceKeepsSlidingVariableAtZero) {
  ExperimentConfig c = base_config();
  c.a_k_hat0 = c.a_k_true;
  c.a_d_hat0 = c.a_d_true;
  c.gains.gamma_k = 1e-9 * Matrix3<double>::Identity();
  c.dq0 = matched_joint_velocity(c);
  const SimLog log = run_experiment(c);
  ASSERT_TRUE(log.completed());
  for (const auto& r : log.rows) EXPECT_LT(r.s.norm(), 1e-6);
  // dx decays like exp(-alpha t).
  const double ratio = log.rows[100].position_error.norm() / log.rows[0].position_error.norm();
  EXPECT_NEAR(std::log(ratio) / log.rows[100].t, -c.gains.alpha, 0.05);
}

}  // namespace
}  // namespace ajac
