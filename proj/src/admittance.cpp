#include "balance_assist/admittance.hpp"

#include <Eigen/Cholesky>

namespace balance_assist {

Matrix6d rotate_to_world(const Vector6d& diag6, const Matrix3d& R_WP) {
  Matrix6d out = Matrix6d::Zero();
  out.topLeftCorner<3, 3>() =
      R_WP * diag6.head<3>().asDiagonal() * R_WP.transpose();
  out.bottomRightCorner<3, 3>() =
      R_WP * diag6.tail<3>().asDiagonal() * R_WP.transpose();
  return out;
}

namespace {

AdmittanceState step_impl(const AdmittanceState& s, const Wrench6& wrench,
                          const Pose6& x_ref, const PrincipalAdmittance& adm,
                          double dt, bool with_stiffness) {
  const Matrix6d M = rotate_to_world(adm.m_p, adm.R_WP);
  const Matrix6d D = rotate_to_world(adm.d_p, adm.R_WP);
  const Twist6& v = s.xdot_d;

  // implicit midpoint on (e, v): (M + dt/2 D + dt^2/4 K) v' =
  //   M v + dt (wrench - K e) - dt/2 D v - dt^2/4 K v
  Matrix6d A = M + (0.5 * dt) * D;
  Vector6d rhs = M * v + dt * wrench - (0.5 * dt) * (D * v);
  if (with_stiffness) {
    const Matrix6d K = rotate_to_world(adm.k_p, adm.R_WP);
    const Vector6d e = pose_error(s.x_d, x_ref);
    A += (0.25 * dt * dt) * K;
    rhs += -dt * (K * e) - (0.25 * dt * dt) * (K * v);
  }
  const Twist6 v_new = A.llt().solve(rhs);
  const Twist6 v_mid = 0.5 * (v + v_new);

  AdmittanceState out;
  out.x_d.position = s.x_d.position + dt * v_mid.head<3>();
  out.x_d.orientation =
      (quat_exp(dt * v_mid.tail<3>()) * s.x_d.orientation).normalized();
  out.xdot_d = v_new;
  return out;
}

}  // namespace

AdmittanceState step_coupled(const AdmittanceState& s, const Wrench6& wrench,
                             const Pose6& x_ref, const PrincipalAdmittance& adm,
                             double dt) {
  const bool with_stiffness = !adm.k_p.isZero(0.0);
  return step_impl(s, wrench, x_ref, adm, dt, with_stiffness);
}

AdmittanceState step_free(const AdmittanceState& s, const Wrench6& wrench,
                          const PrincipalAdmittance& adm, double dt) {
  return step_impl(s, wrench, s.x_d, adm, dt, false);
}

double critical_damping(double k, double m) { return 2.0 * std::sqrt(k * m); }

}  // namespace balance_assist
