#pragma once

#include "balance_assist/types.hpp"

#include <array>

namespace balance_assist {

/// One classic-DH link row: T = Rz(theta0 + q) Tz(d) Tx(a) Rx(alpha).
struct DhRow {
  double a = 0.0;      // [m]
  double alpha = 0.0;  // [rad]
  double d = 0.0;      // [m]
  double theta0 = 0.0; // joint zero offset [rad]
};

/// Geometry of the omni-base + 6-DoF arm chain.
struct KinematicParams {
  std::array<DhRow, 6> dh{};
  Eigen::Vector3d arm_mount{0.0, 0.0, 0.60};  // arm base in the base frame [m]
  double handle_offset = 0.12;                // flange +Z to handle origin [m]
  Eigen::Matrix<double, 6, 1> arm_q_min =
      Eigen::Matrix<double, 6, 1>::Constant(-2.0 * M_PI);
  Eigen::Matrix<double, 6, 1> arm_q_max =
      Eigen::Matrix<double, 6, 1>::Constant(2.0 * M_PI);
};

/// UR16e-like default link table (publicly documented dimensions).
KinematicParams default_kinematics();

/// Handle-frame pose in the world. Total on any in-range q.
Pose6 forward_kinematics(const JointState& q, const KinematicParams& params);

/// 6x9 whole-body Jacobian mapping (base xdot, ydot, yaw rate, arm rates) to
/// the handle twist in the world frame, [linear; angular].
Matrix69d jacobian(const JointState& q, const KinematicParams& params);

/// Explicit Euler joint update. Rates are clamped componentwise to
/// vel_limits, yaw is re-normalized to (-pi, pi], arm angles clamped to the
/// configured limits. The omni base is holonomic: all three base rates are
/// independent.
JointState integrate_joints(const JointState& q, const Vector9d& qdot_d,
                            double dt, const KinematicParams& params,
                            const Vector9d& vel_limits);

}  // namespace balance_assist
