#pragma once

#include "balance_assist/types.hpp"

namespace balance_assist {

constexpr double kGravity = 9.81;  // [m/s^2]

/// Anthropometrics plus the grasp/hand-path model of one simulated subject.
/// Lengths derive from stature via standard segment ratios.
struct HumanParams {
  double mass = 65.5;    // [kg]
  double height = 1.707; // [m]
  double com_ratio = 0.55;       // CoM height fraction of stature
  Eigen::Vector3d ankle{0.0, 0.0, 0.0};
  double shoulder_ratio = 0.818; // shoulder height fraction
  double upper_arm = 0.0;        // [m]; 0 -> derived as 0.186 * height
  double forearm = 0.0;          // [m]; 0 -> derived as 0.180 * height
  double grip_stiffness = 2000.0;  // [N/m]
  double grip_damping = 30.0;      // [N s/m]
  double voluntary_limit_frac = 0.08;  // of body weight

  // preferred hand path: straight line through the grasp point, per unit
  // sin(lean); the slope differs between pressing down (fwd) and pulling
  // up (bwd) on the handle
  double hand_gain_ratio = 1.0;   // of shoulder height
  double hand_angle_fwd = 0.12;   // [rad] below horizontal
  double hand_angle_bwd = 0.32;   // [rad] above horizontal

  // support-polygon anthropometrics (fractions of stature)
  double toe_ratio = 0.115;        // ankle to toe
  double heel_ratio = 0.044;       // ankle to heel
  double half_stance_ratio = 0.094;
  double dz_lateral_fraction = 0.55;  // of the half stance width

  double com_height() const { return com_ratio * height; }
  double shoulder_height() const { return shoulder_ratio * height; }
  double upper_arm_len() const { return upper_arm > 0.0 ? upper_arm : 0.186 * height; }
  double forearm_len() const { return forearm > 0.0 ? forearm : 0.180 * height; }
  double weight() const { return mass * kGravity; }  // w_h [N]
};

enum class Phase { Lean, Hold, Recover, Stepped };

const char* phase_name(Phase p);
Phase phase_from_name(const std::string& s);

/// Sagittal inverted-pendulum state about the ankles. lean > 0 is forward.
struct HumanState {
  double lean = 0.0;       // [rad]
  double lean_rate = 0.0;  // [rad/s]
  Eigen::Vector3d com{0.0, 0.0, 0.0};
  Eigen::Vector2d cop{0.0, 0.0};  // ground projection of com
  double elbow = 0.0;             // [rad], in [-pi, 0]
  Phase phase = Phase::Lean;
};

struct Rect {
  Eigen::Vector2d lo{0.0, 0.0};
  Eigen::Vector2d hi{0.0, 0.0};
  bool contains(const Eigen::Vector2d& p) const {
    return p.x() >= lo.x() && p.x() <= hi.x() && p.y() >= lo.y() && p.y() <= hi.y();
  }
};

/// Support polygon and the subject-calibrated deadband zone, DZ inside SP.
struct SupportRegion {
  Rect sp;
  Rect dz;
};

Eigen::Vector3d com_position(const HumanParams& p, double lean);

/// Quasi-static CoP: the CoM dropped onto the ground plane.
Eigen::Vector2d cop_estimate(const Eigen::Vector3d& com);

/// 0 inside the DZ, else Euclidean distance to the DZ rectangle.
double dz_distance(const Eigen::Vector2d& cop, const SupportRegion& region);

/// Unit vector from the CoP toward its closest DZ point; zero inside.
Eigen::Vector2d dz_recovery_direction(const Eigen::Vector2d& cop,
                                      const SupportRegion& region);

/// DZ borders at the CoP of the widest safe lean angles; SP from foot
/// anthropometrics. Throws std::runtime_error when the DZ depth comes out
/// under 1 cm or the DZ does not fit strictly inside the SP.
SupportRegion calibrate_dz(const HumanParams& p, double max_safe_lean_fwd,
                           double max_safe_lean_bwd);

/// Semi-implicit Euler step of I dd(lean) = m g L sin(lean) + tau_ankle +
/// tau_hand, with tau_hand the moment about the ankle of the robot-applied
/// force at the hand point. com/cop are refreshed, elbow and phase are left
/// to the caller.
HumanState pendulum_step(const HumanState& s, double tau_ankle,
                         const Wrench6& hand_wrench_on_human,
                         const Eigen::Vector3d& hand_point,
                         const HumanParams& p, double dt);

/// 0 = arm extended, -pi = fully flexed. The shoulder-hand distance is
/// clamped to the reachable interval.
double elbow_angle(const Eigen::Vector3d& shoulder, const Eigen::Vector3d& hand,
                   double l_u, double l_f);

Eigen::Vector3d shoulder_position(const HumanParams& p, double lean);

/// Preferred hand point for the current lean; hand_home is the handle pose
/// at grasp time (lean 0).
Eigen::Vector3d hand_anchor(const HumanParams& p, const Eigen::Vector3d& hand_home,
                            double lean);
Eigen::Vector3d hand_anchor_velocity(const HumanParams& p, double lean,
                                     double lean_rate);

/// Wrench the human applies on the handle: grip spring-damper from the
/// anchor mismatch plus the voluntary force. Torque-free (pivoting grasp).
/// The equal-and-opposite force goes to pendulum_step.
Wrench6 grasp_wrench(const HumanState& s, const Pose6& ee, const Twist6& ee_vel,
                     const HumanParams& p, const Eigen::Vector3d& hand_home,
                     const Eigen::Vector3d& voluntary);

/// Scripted fall/recovery behavior constants.
struct BehaviorConfig {
  double lean_start_time = 1.0;   // [s]
  double lean_rate = 0.038;       // target lean ramp [rad/s]
  double lean_cap = 0.35;         // [rad]
  double balance_kp_frac = 1.6;   // of m g L, upright PD
  double balance_kd_frac = 0.7;   // of sqrt(I m g L)
  double hold_stiffness_frac = 0.93;  // passive ankle stiffness, of m g L
  double hold_damping = 100.0;     // [N m s/rad]
  double defect_torque = 26.0;    // residual let-go bias in Hold [N m]
  double t_wait = 1.5;            // [s] before a voluntary push
  double min_hold_time = 0.2;     // [s] commitment before re-engaging
  double regain_margin = 0.033;   // [m] outside DZ considered recoverable
  double step_distance = 0.10;    // [m] outside DZ -> step
  double assist_min_force = 5.0;  // [N]
  double voluntary_rate = 400.0;  // [N/s]
};

/// Per-trial behavior automaton: Lean (active balance + scripted lean-out),
/// Hold (passive, tone frozen at the crossing), Recover (bounded voluntary
/// hand force), Stepped (failure). Owns the transition latches.
class BehaviorPolicy {
 public:
  BehaviorPolicy(const HumanParams& p, const BehaviorConfig& cfg, double direction);

  struct Output {
    double tau_ankle = 0.0;
    Eigen::Vector3d voluntary_force{0.0, 0.0, 0.0};
    Phase phase = Phase::Lean;
  };

  /// assist_restoring_force: horizontal component, along the recovery
  /// direction, of the strategy's spring force.
  Output step(const HumanState& s, double t, bool assist_detected,
              double assist_restoring_force, const SupportRegion& region);

  bool recovered() const { return recovered_; }
  double direction() const { return dir_; }

 private:
  HumanParams p_;
  BehaviorConfig cfg_;
  double dir_;  // +1 fwd, -1 bwd
  double mgl_, inertia_;
  Phase phase_ = Phase::Lean;
  bool recovered_ = false;
  double lean_cross_ = 0.0;
  double t_hold_ = 0.0;
  double t_out_ = -1.0;
  double t_recover_ = 0.0;
};

}  // namespace balance_assist
