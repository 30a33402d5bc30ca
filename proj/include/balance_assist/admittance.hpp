#pragma once

#include "balance_assist/types.hpp"

namespace balance_assist {

/// Principal-axis admittance parameters. The 6x6 world matrices are the
/// congruence H M_p H^T with H = diag(R_WP, R_WP), so the world matrices keep
/// the principal entries as eigenvalues.
struct PrincipalAdmittance {
  Vector6d m_p = (Vector6d() << 6.0, 6.0, 6.0, 0.3, 0.3, 0.3).finished();
  Vector6d d_p = (Vector6d() << 50.0, 50.0, 50.0, 2.0, 2.0, 2.0).finished();
  Vector6d k_p = Vector6d::Zero();
  Matrix3d R_WP = Matrix3d::Identity();
};

struct AdmittanceState {
  Pose6 x_d;
  Twist6 xdot_d = Twist6::Zero();
};

/// diag(d) rotated to the world frame per 3-block: R diag R^T.
Matrix6d rotate_to_world(const Vector6d& diag6, const Matrix3d& R_WP);

/// One implicit-midpoint step of
///   M_adm xdd + D_adm xd + K_adm (x (-) x_ref) = wrench,
/// with the orientation error taken as axis-angle. dt in (0, 5 ms].
AdmittanceState step_coupled(const AdmittanceState& s, const Wrench6& wrench,
                             const Pose6& x_ref, const PrincipalAdmittance& adm,
                             double dt);

/// Null-stiffness admittance (M xdd + D xd = wrench); identical code path to
/// step_coupled with k_p = 0, so the two produce bitwise-equal trajectories.
AdmittanceState step_free(const AdmittanceState& s, const Wrench6& wrench,
                          const PrincipalAdmittance& adm, double dt);

/// d = 2 sqrt(k m). With k = 0 this returns 0 and the caller keeps the
/// stable-state damping instead.
double critical_damping(double k, double m);

}  // namespace balance_assist
