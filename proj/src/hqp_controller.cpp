#include "balance_assist/hqp_controller.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>

namespace balance_assist {

Twist6 clik_velocity(const Pose6& x_d, const Twist6& xdot_d,
                     const Pose6& x_meas, const Vector6d& gain) {
  return xdot_d + gain.cwiseProduct(pose_error(x_d, x_meas));
}

HqpResult solve_hqp(const Matrix69d& J, const Twist6& xdot_star,
                    const JointState& q, const HqpConfig& cfg) {
  HqpResult res;

  const Matrix6d JJt = J * J.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix6d> eig(JJt);
  res.sigma_min = std::sqrt(std::max(eig.eigenvalues().minCoeff(), 0.0));
  res.rank_deficient = res.sigma_min < cfg.sigma_min_threshold;
  const double lambda = res.rank_deficient ? cfg.damping_singular : cfg.damping;

  // damped pseudoinverse J+ = J^T (J J^T + lambda^2 I)^-1
  Matrix6d A = JJt + lambda * lambda * Matrix6d::Identity();
  Eigen::LLT<Matrix6d> llt(A);
  const Eigen::Matrix<double, 9, 6> Jpinv =
      J.transpose() * llt.solve(Matrix6d::Identity());

  const Vector9d qdot1 = Jpinv * xdot_star;

  // level 2: preference velocity (zero base rates, arm drift toward the
  // preferred configuration) projected onto null(J); leaves the level-1
  // minimum-norm solution untouched when the preference vanishes
  const Eigen::Matrix<double, 9, 9> N =
      Eigen::Matrix<double, 9, 9>::Identity() - Jpinv * J;
  Vector9d u_pref = Vector9d::Zero();
  u_pref.tail<6>() = cfg.secondary_gain * (cfg.preferred_arm - q.arm_q);
  Vector9d qdot = qdot1 + N * (u_pref - qdot1);

  // direction-preserving scaling into the limits, then exact clamp
  double scale = 1.0;
  for (int i = 0; i < 9; ++i) {
    const double lim = std::abs(cfg.vel_limits[i]);
    if (std::abs(qdot[i]) > lim && lim > 0.0)
      scale = std::min(scale, lim / std::abs(qdot[i]));
  }
  qdot *= scale;
  for (int i = 0; i < 9; ++i) {
    const double lim = std::abs(cfg.vel_limits[i]);
    qdot[i] = std::clamp(qdot[i], -lim, lim);
  }
  res.qdot = qdot;
  return res;
}

}  // namespace balance_assist
