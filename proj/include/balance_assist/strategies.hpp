#pragma once

#include "balance_assist/human_model.hpp"
#include "balance_assist/types.hpp"

#include <cstdint>
#include <random>
#include <string>

namespace balance_assist {

enum class StrategyKind { FSA, MBA, HWA };

const char* strategy_name(StrategyKind k);
StrategyKind strategy_from_name(const std::string& s);

/// DZ border latched at the stable->unstable transition; axis-aligned.
struct MirrorLine {
  int axis = 0;           // 0: x = offset, 1: y = offset
  double offset = 0.0;    // [m]
  double outward = 1.0;   // sign of the outward normal along the axis
};

/// Stiffness/damping baseline shared by the strategies.
struct StrategyGains {
  double k_p1 = 400.0;  // [N/m]
  Vector6d m_p = (Vector6d() << 6.0, 6.0, 6.0, 0.3, 0.3, 0.3).finished();
  Vector6d d_stable = (Vector6d() << 50.0, 50.0, 50.0, 2.0, 2.0, 2.0).finished();
  double hwa_wall_clearance = 0.012;  // z* below the trial-start EE height [m]
};

enum class CommandMode { Free, Coupled };

/// What the reference generator hands the admittance controller each tick.
struct ReferenceCommand {
  Pose6 x_ref;
  Matrix3d R_WP = Matrix3d::Identity();
  Vector6d k_p = Vector6d::Zero();
  Vector6d d_p = Vector6d::Zero();
  CommandMode mode = CommandMode::Free;
};

/// Stable/Unstable latching on DZ crossings. On stable->unstable the current
/// EE pose becomes x* and the crossed border the mirror line; the random
/// orthogonal direction for p2 is re-sampled once per unstable episode.
/// Corner exits latch the face whose outward normal best aligns with the CoP
/// velocity, front/back winning ties.
class BalanceStateMachine {
 public:
  explicit BalanceStateMachine(std::uint64_t seed);

  void update(const Eigen::Vector2d& cop, const SupportRegion& region,
              const Pose6& ee_pose);

  bool unstable() const { return unstable_; }
  const Pose6& latched_pose() const { return x_star_; }
  const MirrorLine& mirror() const { return mirror_; }
  const Eigen::Vector3d& episode_direction_seed() const { return episode_u_; }

 private:
  std::mt19937_64 rng_;
  bool unstable_ = false;
  bool have_prev_ = false;
  Eigen::Vector2d prev_cop_{0.0, 0.0};
  Pose6 x_star_;
  MirrorLine mirror_;
  Eigen::Vector3d episode_u_{0.0, 1.0, 0.0};
};

/// Right-handed orthonormal triad from p1 and the episode seed vector.
Matrix3d principal_frame(const Eigen::Vector3d& p1, const Eigen::Vector3d& seed_u);

/// Fixed Spring Assistance: x_ref = x*, p1 along the EE displacement from it
/// (falling back to the latched border normal when degenerate), critical
/// damping along p1.
ReferenceCommand fsa_reference(const BalanceStateMachine& sm,
                               const Pose6& ee_pose, const StrategyGains& g);

/// Mirrored Balance Assistance: x_ref = (r + 2 dcp p1, theta) with p1 toward
/// the mirrored CoP.
ReferenceCommand mba_reference(const BalanceStateMachine& sm,
                               const Eigen::Vector2d& cop, const Pose6& ee_pose,
                               const StrategyGains& g);

/// Horizontal Wall Assistance baseline: a virtual wall at z_threshold
/// resisting downward motion only; Free above it.
ReferenceCommand hwa_reference(const Pose6& ee_pose, double z_threshold,
                               const StrategyGains& g);

/// Free (stable-state) command: null stiffness, stable damping.
ReferenceCommand free_command(const Pose6& ee_pose, const StrategyGains& g);

/// Per-trial orchestration of the state machine and the selected strategy.
class ReferenceGenerator {
 public:
  ReferenceGenerator(StrategyKind kind, const StrategyGains& gains,
                     std::uint64_t seed);

  /// Latches the HWA threshold from the first EE pose it sees.
  ReferenceCommand update(const Eigen::Vector2d& cop, const SupportRegion& region,
                          const Pose6& ee_pose);

  const BalanceStateMachine& state_machine() const { return sm_; }
  StrategyKind kind() const { return kind_; }
  double hwa_threshold() const { return z_threshold_; }

 private:
  StrategyKind kind_;
  StrategyGains gains_;
  BalanceStateMachine sm_;
  bool z_latched_ = false;
  double z_threshold_ = 0.0;
};

}  // namespace balance_assist
