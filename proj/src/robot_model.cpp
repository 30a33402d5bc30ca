#include "balance_assist/robot_model.hpp"

#include <algorithm>

namespace balance_assist {

KinematicParams default_kinematics() {
  KinematicParams p;
  // UR16e link table (a, alpha, d), classic DH.
  p.dh[0] = {0.0, M_PI_2, 0.1807, 0.0};
  p.dh[1] = {-0.4784, 0.0, 0.0, 0.0};
  p.dh[2] = {-0.36, 0.0, 0.0, 0.0};
  p.dh[3] = {0.0, M_PI_2, 0.17415, 0.0};
  p.dh[4] = {0.0, -M_PI_2, 0.11985, 0.0};
  p.dh[5] = {0.0, 0.0, 0.11655, 0.0};
  p.arm_mount = Eigen::Vector3d(0.0, 0.0, 0.60);
  p.handle_offset = 0.12;
  return p;
}

namespace {

Eigen::Isometry3d dh_transform(const DhRow& row, double q) {
  const double th = row.theta0 + q;
  const double ct = std::cos(th), st = std::sin(th);
  const double ca = std::cos(row.alpha), sa = std::sin(row.alpha);
  Eigen::Isometry3d T = Eigen::Isometry3d::Identity();
  T.linear() << ct, -st * ca, st * sa,
                st, ct * ca, -ct * sa,
                0.0, sa, ca;
  T.translation() << row.a * ct, row.a * st, row.d;
  return T;
}

}  // namespace

namespace {

// chain in the yaw-only frame; the base translation enters once at the end,
// so translating the base shifts the result by exactly one addition
Eigen::Isometry3d chain_transform(const JointState& q, const KinematicParams& params) {
  Eigen::Isometry3d T = Eigen::Isometry3d::Identity();
  T.linear() = Eigen::AngleAxisd(q.base_pose.z(), Eigen::Vector3d::UnitZ())
                   .toRotationMatrix();
  T.translation() = T.linear() * params.arm_mount;
  for (int i = 0; i < 6; ++i) T = T * dh_transform(params.dh[i], q.arm_q[i]);
  return T;
}

}  // namespace

Pose6 forward_kinematics(const JointState& q, const KinematicParams& params) {
  Eigen::Isometry3d T = chain_transform(q, params);
  Pose6 out;
  out.position = T.translation() +
                 T.linear() * Eigen::Vector3d(0.0, 0.0, params.handle_offset) +
                 Eigen::Vector3d(q.base_pose.x(), q.base_pose.y(), 0.0);
  out.orientation = Eigen::Quaterniond(T.linear()).normalized();
  return out;
}

Matrix69d jacobian(const JointState& q, const KinematicParams& params) {
  // all moment arms in the yaw-only frame; the Jacobian is invariant to the
  // base translation
  Eigen::Isometry3d T = Eigen::Isometry3d::Identity();
  T.linear() = Eigen::AngleAxisd(q.base_pose.z(), Eigen::Vector3d::UnitZ())
                   .toRotationMatrix();
  T.translation() = T.linear() * params.arm_mount;

  std::array<Eigen::Vector3d, 6> axis, origin;
  for (int i = 0; i < 6; ++i) {
    axis[i] = T.linear().col(2);
    origin[i] = T.translation();
    T = T * dh_transform(params.dh[i], q.arm_q[i]);
  }
  const Eigen::Vector3d p_ee =
      T.translation() + T.linear() * Eigen::Vector3d(0.0, 0.0, params.handle_offset);

  Matrix69d J = Matrix69d::Zero();
  // base translation: world x/y, no angular effect (planar holonomic base)
  J(0, 0) = 1.0;
  J(1, 1) = 1.0;
  // base yaw about the vertical axis through the base origin
  J.block<3, 1>(0, 2) = Eigen::Vector3d::UnitZ().cross(p_ee);
  J.block<3, 1>(3, 2) = Eigen::Vector3d::UnitZ();
  for (int i = 0; i < 6; ++i) {
    J.block<3, 1>(0, 3 + i) = axis[i].cross(p_ee - origin[i]);
    J.block<3, 1>(3, 3 + i) = axis[i];
  }
  return J;
}

JointState integrate_joints(const JointState& q, const Vector9d& qdot_d,
                            double dt, const KinematicParams& params,
                            const Vector9d& vel_limits) {
  Vector9d qdot = qdot_d;
  for (int i = 0; i < 9; ++i) {
    const double lim = std::abs(vel_limits[i]);
    qdot[i] = std::clamp(qdot[i], -lim, lim);
  }
  JointState out = q;
  out.base_pose.x() += dt * qdot[0];
  out.base_pose.y() += dt * qdot[1];
  out.base_pose.z() = wrap_angle(out.base_pose.z() + dt * qdot[2]);
  for (int i = 0; i < 6; ++i) {
    out.arm_q[i] = std::clamp(q.arm_q[i] + dt * qdot[3 + i], params.arm_q_min[i],
                              params.arm_q_max[i]);
  }
  out.time = q.time + dt;
  return out;
}

}  // namespace balance_assist
