#pragma once

#include "balance_assist/types.hpp"

namespace balance_assist {

struct HqpConfig {
  Vector6d clik_gain = Vector6d::Constant(20.0);  // [1/s]
  Eigen::Matrix<double, 6, 1> preferred_arm =
      Eigen::Matrix<double, 6, 1>::Zero();        // [rad]
  double secondary_gain = 1.0;                    // [1/s]
  Vector9d vel_limits = Vector9d::Constant(2.0);  // [m/s, rad/s]
  double tolerance = 1e-8;
  double damping = 1e-8;           // DLS damping, nominal
  double damping_singular = 1e-3;  // raised near singularities
  double sigma_min_threshold = 1e-4;
};

struct HqpResult {
  Vector9d qdot = Vector9d::Zero();
  bool rank_deficient = false;
  double sigma_min = 0.0;
};

/// CLIK reference twist: xdot* = xdot_d + gain (.) err(x_d, x_meas).
Twist6 clik_velocity(const Pose6& x_d, const Twist6& xdot_d,
                     const Pose6& x_meas, const Vector6d& gain);

/// Two-level hierarchical QP.
/// Level 1 minimizes ||J qdot - xdot*||^2 (damped least squares, minimum
/// norm); level 2 minimizes ||qdot - u_pref||^2 in the null space of level 1,
/// where u_pref carries zero base rates and the arm drift toward the
/// preferred configuration, so the base absorbs end-effector motion. The
/// result is scaled direction-preservingly into the velocity limits.
HqpResult solve_hqp(const Matrix69d& J, const Twist6& xdot_star,
                    const JointState& q, const HqpConfig& cfg);

}  // namespace balance_assist
