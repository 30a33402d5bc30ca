#include "balance_assist/human_model.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace balance_assist {

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::Lean: return "Lean";
    case Phase::Hold: return "Hold";
    case Phase::Recover: return "Recover";
    case Phase::Stepped: return "Stepped";
  }
  return "?";
}

Phase phase_from_name(const std::string& s) {
  if (s == "Lean") return Phase::Lean;
  if (s == "Hold") return Phase::Hold;
  if (s == "Recover") return Phase::Recover;
  if (s == "Stepped") return Phase::Stepped;
  throw std::runtime_error("unknown phase name: " + s);
}

Eigen::Vector3d com_position(const HumanParams& p, double lean) {
  const double L = p.com_height();
  return p.ankle + L * Eigen::Vector3d(std::sin(lean), 0.0, std::cos(lean));
}

Eigen::Vector2d cop_estimate(const Eigen::Vector3d& com) {
  return com.head<2>();
}

double dz_distance(const Eigen::Vector2d& cop, const SupportRegion& region) {
  const Rect& dz = region.dz;
  const double dx = std::max({dz.lo.x() - cop.x(), 0.0, cop.x() - dz.hi.x()});
  const double dy = std::max({dz.lo.y() - cop.y(), 0.0, cop.y() - dz.hi.y()});
  return std::hypot(dx, dy);
}

Eigen::Vector2d dz_recovery_direction(const Eigen::Vector2d& cop,
                                      const SupportRegion& region) {
  const Rect& dz = region.dz;
  const Eigen::Vector2d proj(std::clamp(cop.x(), dz.lo.x(), dz.hi.x()),
                             std::clamp(cop.y(), dz.lo.y(), dz.hi.y()));
  const Eigen::Vector2d d = proj - cop;
  const double n = d.norm();
  return n > 0.0 ? Eigen::Vector2d(d / n) : Eigen::Vector2d::Zero();
}

SupportRegion calibrate_dz(const HumanParams& p, double max_safe_lean_fwd,
                           double max_safe_lean_bwd) {
  SupportRegion r;
  const double scale = p.height;
  const Eigen::Vector2d ankle_xy = p.ankle.head<2>();
  r.sp.lo = ankle_xy + Eigen::Vector2d(-p.heel_ratio * scale, -p.half_stance_ratio * scale);
  r.sp.hi = ankle_xy + Eigen::Vector2d(p.toe_ratio * scale, p.half_stance_ratio * scale);

  const double front = cop_estimate(com_position(p, max_safe_lean_fwd)).x();
  const double back = cop_estimate(com_position(p, -max_safe_lean_bwd)).x();
  const double lat = p.dz_lateral_fraction * p.half_stance_ratio * scale;
  r.dz.lo = Eigen::Vector2d(back, ankle_xy.y() - lat);
  r.dz.hi = Eigen::Vector2d(front, ankle_xy.y() + lat);

  if (r.dz.hi.x() - r.dz.lo.x() < 0.01)
    throw std::runtime_error("calibrate_dz: DZ depth below 1 cm");
  const bool inside = r.dz.lo.x() > r.sp.lo.x() && r.dz.hi.x() < r.sp.hi.x() &&
                      r.dz.lo.y() > r.sp.lo.y() && r.dz.hi.y() < r.sp.hi.y();
  if (!inside)
    throw std::runtime_error("calibrate_dz: DZ does not fit strictly inside the SP");
  if (!r.dz.contains(ankle_xy))
    throw std::runtime_error("calibrate_dz: upright CoP outside the DZ");
  return r;
}

HumanState pendulum_step(const HumanState& s, double tau_ankle,
                         const Wrench6& hand_wrench_on_human,
                         const Eigen::Vector3d& hand_point,
                         const HumanParams& p, double dt) {
  const double L = p.com_height();
  const double inertia = p.mass * L * L;
  const Eigen::Vector3d f = hand_wrench_on_human.head<3>();
  const Eigen::Vector3d r = hand_point - p.ankle;
  const double tau_hand = r.cross(f).y() + hand_wrench_on_human[4];
  const double tau_g = p.mass * kGravity * L * std::sin(s.lean);

  HumanState out = s;
  out.lean_rate = s.lean_rate + dt * (tau_g + tau_ankle + tau_hand) / inertia;
  out.lean = s.lean + dt * out.lean_rate;
  out.com = com_position(p, out.lean);
  out.cop = cop_estimate(out.com);
  return out;
}

double elbow_angle(const Eigen::Vector3d& shoulder, const Eigen::Vector3d& hand,
                   double l_u, double l_f) {
  const double d_min = std::abs(l_u - l_f);
  const double d_max = l_u + l_f;
  const double d = std::clamp((shoulder - hand).norm(), d_min, d_max);
  const double c = std::clamp(
      (l_u * l_u + l_f * l_f - d * d) / (2.0 * l_u * l_f), -1.0, 1.0);
  return -(M_PI - std::acos(c));
}

Eigen::Vector3d shoulder_position(const HumanParams& p, double lean) {
  const double h = p.shoulder_height();
  return p.ankle + h * Eigen::Vector3d(std::sin(lean), 0.0, std::cos(lean));
}

namespace {

Eigen::Vector3d hand_path_dir(const HumanParams& p, double lean) {
  const double a = lean >= 0.0 ? p.hand_angle_fwd : p.hand_angle_bwd;
  return Eigen::Vector3d(std::cos(a), 0.0, -std::sin(a));
}

}  // namespace

Eigen::Vector3d hand_anchor(const HumanParams& p, const Eigen::Vector3d& hand_home,
                            double lean) {
  const double g = p.hand_gain_ratio * p.shoulder_height();
  return hand_home + g * std::sin(lean) * hand_path_dir(p, lean);
}

Eigen::Vector3d hand_anchor_velocity(const HumanParams& p, double lean,
                                     double lean_rate) {
  const double g = p.hand_gain_ratio * p.shoulder_height();
  return g * std::cos(lean) * lean_rate * hand_path_dir(p, lean);
}

Wrench6 grasp_wrench(const HumanState& s, const Pose6& ee, const Twist6& ee_vel,
                     const HumanParams& p, const Eigen::Vector3d& hand_home,
                     const Eigen::Vector3d& voluntary) {
  const Eigen::Vector3d anchor = hand_anchor(p, hand_home, s.lean);
  const Eigen::Vector3d anchor_vel = hand_anchor_velocity(p, s.lean, s.lean_rate);
  Wrench6 w = Wrench6::Zero();
  w.head<3>() = p.grip_stiffness * (anchor - ee.position) +
                p.grip_damping * (anchor_vel - ee_vel.head<3>()) + voluntary;
  return w;
}

BehaviorPolicy::BehaviorPolicy(const HumanParams& p, const BehaviorConfig& cfg,
                               double direction)
    : p_(p), cfg_(cfg), dir_(direction >= 0.0 ? 1.0 : -1.0) {
  const double L = p.com_height();
  mgl_ = p.mass * kGravity * L;
  inertia_ = p.mass * L * L;
}

BehaviorPolicy::Output BehaviorPolicy::step(const HumanState& s, double t,
                                            bool assist_detected,
                                            double assist_restoring_force,
                                            const SupportRegion& region) {
  Output out;
  const double dzd = dz_distance(s.cop, region);
  const bool inside = dzd == 0.0;
  const double grav_ff = -mgl_ * std::sin(s.lean);

  if (phase_ == Phase::Lean) {
    double target = 0.0;
    if (!recovered_ && t >= cfg_.lean_start_time)
      target = dir_ * std::min((t - cfg_.lean_start_time) * cfg_.lean_rate,
                               cfg_.lean_cap);
    const double kp = cfg_.balance_kp_frac * mgl_;
    const double kd = cfg_.balance_kd_frac * std::sqrt(inertia_ * mgl_);
    out.tau_ankle = grav_ff + kp * (target - s.lean) - kd * s.lean_rate;
    if (!inside && !recovered_) {
      phase_ = Phase::Hold;
      lean_cross_ = s.lean;
      t_hold_ = t;
      if (t_out_ < 0.0) t_out_ = t;
    }
  }

  if (phase_ == Phase::Hold || phase_ == Phase::Recover) {
    // tone frozen at the crossing plus intrinsic stiffness/damping about it,
    // biased outward by the let-go defect
    out.tau_ankle = -mgl_ * std::sin(lean_cross_) + dir_ * cfg_.defect_torque -
                    cfg_.hold_stiffness_frac * mgl_ * (s.lean - lean_cross_) -
                    cfg_.hold_damping * s.lean_rate;

    if (phase_ == Phase::Hold && !inside && t - t_out_ >= cfg_.t_wait &&
        assist_detected && assist_restoring_force >= cfg_.assist_min_force) {
      phase_ = Phase::Recover;
      t_recover_ = t;
    }
    if (dzd > cfg_.step_distance &&
        assist_restoring_force < cfg_.assist_min_force) {
      phase_ = Phase::Stepped;
    }
    // arrested and close enough to the DZ: natural postural control resumes
    const double outward_vel = dir_ * s.lean_rate;
    if (phase_ != Phase::Stepped && outward_vel <= 1e-3 &&
        dzd <= cfg_.regain_margin && t - t_hold_ >= cfg_.min_hold_time) {
      phase_ = Phase::Lean;
      recovered_ = true;
      const double kp = cfg_.balance_kp_frac * mgl_;
      const double kd = cfg_.balance_kd_frac * std::sqrt(inertia_ * mgl_);
      out.tau_ankle = grav_ff - kp * s.lean - kd * s.lean_rate;
    }
  }

  if (phase_ == Phase::Recover) {
    const double cap = p_.voluntary_limit_frac * p_.weight();
    const double mag = std::min(cfg_.voluntary_rate * (t - t_recover_), cap);
    out.voluntary_force = Eigen::Vector3d(dir_ * mag, 0.0, 0.0);
  }

  out.phase = phase_;
  return out;
}

}  // namespace balance_assist
