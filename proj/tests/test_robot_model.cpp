#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "balance_assist/robot_model.hpp"
#include "oracles.hpp"

#include <random>

using namespace balance_assist;

namespace {

JointState random_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  JointState q;
  q.base_pose = Eigen::Vector3d(u(rng), u(rng), u(rng));
  for (int i = 0; i < 6; ++i) q.arm_q[i] = u(rng);
  return q;
}

}  // namespace

TEST_CASE("fk at home equals the analytic chain sum") {
  const KinematicParams p = default_kinematics();
  JointState q;  // all zeros
  const Pose6 ee = forward_kinematics(q, p);
  // classic DH at zero angles: links extend along x, the z offsets stack
  const double x = p.dh[1].a + p.dh[2].a;                       // a2 + a3
  const double y = -(p.dh[3].d + p.dh[5].d + p.handle_offset);  // offsets along -y
  const double z = p.arm_mount.z() + p.dh[0].d - p.dh[4].d;
  CHECK(ee.position.x() == doctest::Approx(x).epsilon(1e-12));
  CHECK(ee.position.y() == doctest::Approx(y).epsilon(1e-12));
  CHECK(ee.position.z() == doctest::Approx(z).epsilon(1e-12));
}

TEST_CASE("base translation shifts the ee exactly") {
  const KinematicParams p = default_kinematics();
  std::mt19937_64 rng(11);
  for (int k = 0; k < 20; ++k) {
    JointState q = random_state(rng);
    const Pose6 a = forward_kinematics(q, p);
    JointState q2 = q;
    q2.base_pose.x() += 1.0;
    const Pose6 b = forward_kinematics(q2, p);
    CHECK(std::abs(b.position.x() - a.position.x() - 1.0) < 1e-13);
    CHECK(b.position.y() == a.position.y());
    CHECK(b.position.z() == a.position.z());
    // orientation and Jacobian are bitwise invariant to base translation
    CHECK((b.orientation.coeffs() - a.orientation.coeffs()).norm() == 0.0);
    CHECK(jacobian(q, p) == jacobian(q2, p));
  }
}

TEST_CASE("fk matches the transform-chain oracle on random configurations") {
  const KinematicParams p = default_kinematics();
  std::mt19937_64 rng(42);
  for (int k = 0; k < 10; ++k) {
    const JointState q = random_state(rng);
    const Pose6 ee = forward_kinematics(q, p);
    const Eigen::Matrix4d T = oracles::fk_chain(q, p);
    CHECK((ee.position - T.block<3, 1>(0, 3)).norm() < 1e-12);
    const Eigen::Matrix3d R = ee.orientation.toRotationMatrix();
    CHECK((R - T.block<3, 3>(0, 0)).norm() < 1e-9);
  }
}

TEST_CASE("jacobian base columns are the planar unit twists") {
  const KinematicParams p = default_kinematics();
  std::mt19937_64 rng(3);
  const JointState q = random_state(rng);
  const Matrix69d J = jacobian(q, p);
  CHECK(J.block<3, 1>(0, 0).isApprox(Eigen::Vector3d::UnitX()));
  CHECK(J.block<3, 1>(0, 1).isApprox(Eigen::Vector3d::UnitY()));
  CHECK(J.block<3, 1>(3, 0).norm() == 0.0);
  CHECK(J.block<3, 1>(3, 1).norm() == 0.0);
  CHECK(J.block<3, 1>(3, 2).isApprox(Eigen::Vector3d::UnitZ()));
}

TEST_CASE("jacobian matches central finite differences") {
  const KinematicParams p = default_kinematics();
  std::mt19937_64 rng(7);
  for (int k = 0; k < 25; ++k) {
    const JointState q = random_state(rng);
    const Matrix69d J = jacobian(q, p);
    const Matrix69d Jfd = oracles::fd_jacobian(q, p);
    CHECK((J - Jfd).cwiseAbs().maxCoeff() < 1e-5);
  }
}

TEST_CASE("vertical stretch is rank deficient") {
  const KinematicParams p = default_kinematics();
  JointState q;
  q.arm_q << 0.0, -M_PI_2, 0.0, -M_PI_2, 0.0, 0.0;
  const Matrix69d J = jacobian(q, p);
  const Eigen::JacobiSVD<Matrix69d> svd(J);
  CHECK(svd.singularValues()(5) < 1e-8);
}

TEST_CASE("jacobian-fk consistency along random directions") {
  const KinematicParams p = default_kinematics();
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double h = 1e-6;
  for (int k = 0; k < 30; ++k) {
    const JointState q = random_state(rng);
    Vector9d dq;
    for (int i = 0; i < 9; ++i) dq[i] = u(rng);
    JointState q2 = q;
    q2.base_pose += h * dq.head<3>();
    q2.arm_q += h * dq.tail<6>();
    const Eigen::Vector3d fd =
        (forward_kinematics(q2, p).position - forward_kinematics(q, p).position) / h;
    const Eigen::Vector3d jv = (jacobian(q, p) * dq).head<3>();
    CHECK((fd - jv).norm() <= 1e-4);
  }
}

TEST_CASE("integrate_joints basics") {
  const KinematicParams p = default_kinematics();
  const Vector9d lim = Vector9d::Constant(10.0);
  JointState q;
  q.base_pose << 0.25, -0.5, 0.5;
  q.arm_q << 0.1, -0.2, 0.3, -0.4, 0.5, -0.6;

  SUBCASE("zero rates leave the configuration unchanged") {
    const JointState out = integrate_joints(q, Vector9d::Zero(), 1e-3, p, lim);
    CHECK(out.base_pose == q.base_pose);
    CHECK(out.arm_q == q.arm_q);
    CHECK(out.time == doctest::Approx(q.time + 1e-3));
  }

  SUBCASE("yaw wraps past pi") {
    JointState s = q;
    s.base_pose.z() = M_PI - 0.01;
    Vector9d rate = Vector9d::Zero();
    rate[2] = 0.02 / 1e-3;
    const JointState out =
        integrate_joints(s, rate, 1e-3, p, Vector9d::Constant(100.0));
    CHECK(out.base_pose.z() == doctest::Approx(-M_PI + 0.01).epsilon(1e-9));
  }

  SUBCASE("constant rate over N steps displaces by N dt rate exactly") {
    // binary-representable values keep repeated addition exact
    const double dt = 0.125;
    Vector9d rate;
    rate << 0.25, -0.5, 0.0625, 0.25, 0.25, -0.25, 0.125, 0.0, 0.5;
    JointState s = q;
    const int N = 16;
    for (int i = 0; i < N; ++i) s = integrate_joints(s, rate, dt, p, lim);
    for (int i = 0; i < 6; ++i)
      CHECK(s.arm_q[i] == q.arm_q[i] + N * dt * rate[3 + i]);
    CHECK(s.base_pose.x() == q.base_pose.x() + N * dt * rate[0]);
    CHECK(s.base_pose.y() == q.base_pose.y() + N * dt * rate[1]);
  }

  SUBCASE("rates clamp to the velocity limits") {
    Vector9d rate = Vector9d::Constant(100.0);
    const JointState out = integrate_joints(q, rate, 0.01, p, lim);
    CHECK(out.base_pose.x() == doctest::Approx(q.base_pose.x() + 0.1));
  }
}
