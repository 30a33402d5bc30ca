#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <cmath>

namespace balance_assist {

using Vector6d = Eigen::Matrix<double, 6, 1>;
using Vector9d = Eigen::Matrix<double, 9, 1>;
using Matrix3d = Eigen::Matrix3d;
using Matrix6d = Eigen::Matrix<double, 6, 6>;
using Matrix69d = Eigen::Matrix<double, 6, 9>;

// 6D vectors use [linear; angular] ordering throughout.
using Twist6 = Vector6d;
using Wrench6 = Vector6d;

/// Task-space pose in the world frame. Orientation is kept as a unit
/// quaternion; controllers see orientation errors as axis-angle 3-vectors.
struct Pose6 {
  Eigen::Vector3d position{Eigen::Vector3d::Zero()};
  Eigen::Quaterniond orientation{Eigen::Quaterniond::Identity()};

  static Pose6 Identity() { return Pose6{}; }
};

/// Whole-body configuration: planar omni-base pose plus six arm joints.
struct JointState {
  Eigen::Vector3d base_pose{Eigen::Vector3d::Zero()};  // x [m], y [m], yaw [rad]
  Eigen::Matrix<double, 6, 1> arm_q{Eigen::Matrix<double, 6, 1>::Zero()};
  double time = 0.0;  // [s]
};

/// Normalize an angle to (-pi, pi].
inline double wrap_angle(double a) {
  a = std::fmod(a + M_PI, 2.0 * M_PI);
  if (a <= 0.0) a += 2.0 * M_PI;
  return a - M_PI;
}

/// Axis-angle (rotation vector) of a unit quaternion, world frame.
inline Eigen::Vector3d quat_log(const Eigen::Quaterniond& q_in) {
  Eigen::Quaterniond q = q_in;
  if (q.w() < 0.0) q.coeffs() *= -1.0;  // shortest arc
  const double vn = q.vec().norm();
  if (vn < 1e-12) return 2.0 * q.vec();  // small angle: sin(t/2) ~ t/2
  const double angle = 2.0 * std::atan2(vn, q.w());
  return (angle / vn) * q.vec();
}

/// Quaternion exp of a rotation vector.
inline Eigen::Quaterniond quat_exp(const Eigen::Vector3d& w) {
  const double n = w.norm();
  if (n < 1e-12) {
    Eigen::Quaterniond q(1.0, 0.5 * w.x(), 0.5 * w.y(), 0.5 * w.z());
    q.normalize();
    return q;
  }
  const double half = 0.5 * n;
  const Eigen::Vector3d axis = w / n;
  return Eigen::Quaterniond(Eigen::AngleAxisd(n, axis));
}

/// 6D pose error a (-) b: [position difference; axis-angle of R_a R_b^T].
inline Vector6d pose_error(const Pose6& a, const Pose6& b) {
  Vector6d e;
  e.head<3>() = a.position - b.position;
  e.tail<3>() = quat_log(a.orientation * b.orientation.conjugate());
  return e;
}

inline Matrix3d skew(const Eigen::Vector3d& v) {
  Matrix3d s;
  s << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return s;
}

}  // namespace balance_assist
