#include "balance_assist/strategies.hpp"

#include "balance_assist/admittance.hpp"
#include "balance_assist/rng.hpp"

#include <stdexcept>

namespace balance_assist {

const char* strategy_name(StrategyKind k) {
  switch (k) {
    case StrategyKind::FSA: return "FSA";
    case StrategyKind::MBA: return "MBA";
    case StrategyKind::HWA: return "HWA";
  }
  return "?";
}

StrategyKind strategy_from_name(const std::string& s) {
  if (s == "FSA" || s == "fsa") return StrategyKind::FSA;
  if (s == "MBA" || s == "mba") return StrategyKind::MBA;
  if (s == "HWA" || s == "hwa") return StrategyKind::HWA;
  throw std::runtime_error("unknown strategy: " + s);
}

BalanceStateMachine::BalanceStateMachine(std::uint64_t seed) : rng_(seed) {}

namespace {

Eigen::Vector3d random_unit(std::mt19937_64& rng) {
  for (;;) {
    const Eigen::Vector3d v(2.0 * uniform01(rng) - 1.0, 2.0 * uniform01(rng) - 1.0,
                            2.0 * uniform01(rng) - 1.0);
    const double n = v.norm();
    if (n > 1e-3 && n <= 1.0) return v / n;
  }
}

}  // namespace

void BalanceStateMachine::update(const Eigen::Vector2d& cop,
                                 const SupportRegion& region,
                                 const Pose6& ee_pose) {
  const bool inside = region.dz.contains(cop);
  if (unstable_ && inside) {
    unstable_ = false;  // re-entry clears the latches
  } else if (!unstable_ && !inside) {
    unstable_ = true;
    x_star_ = ee_pose;
    episode_u_ = random_unit(rng_);

    // candidate faces actually crossed
    struct Face { int axis; double offset; double outward; };
    Face faces[4];
    int n = 0;
    const Rect& dz = region.dz;
    if (cop.x() > dz.hi.x()) faces[n++] = {0, dz.hi.x(), 1.0};
    if (cop.x() < dz.lo.x()) faces[n++] = {0, dz.lo.x(), -1.0};
    if (cop.y() > dz.hi.y()) faces[n++] = {1, dz.hi.y(), 1.0};
    if (cop.y() < dz.lo.y()) faces[n++] = {1, dz.lo.y(), -1.0};
    int pick = 0;
    if (n > 1 && have_prev_) {
      const Eigen::Vector2d vel = cop - prev_cop_;
      double best = -1e300;
      for (int i = 0; i < n; ++i) {
        Eigen::Vector2d normal = Eigen::Vector2d::Zero();
        normal[faces[i].axis] = faces[i].outward;
        double score = normal.dot(vel);
        if (faces[i].axis == 0) score += 1e-12;  // sagittal priority on ties
        if (score > best) { best = score; pick = i; }
      }
    }
    if (n > 0) mirror_ = {faces[pick].axis, faces[pick].offset, faces[pick].outward};
  }
  prev_cop_ = cop;
  have_prev_ = true;
}

Matrix3d principal_frame(const Eigen::Vector3d& p1, const Eigen::Vector3d& seed_u) {
  Eigen::Vector3d p2 = seed_u - seed_u.dot(p1) * p1;
  if (p2.norm() < 1e-9) {
    // seed parallel to p1: take any perpendicular axis
    const Eigen::Vector3d alt =
        std::abs(p1.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
    p2 = alt - alt.dot(p1) * p1;
  }
  p2.normalize();
  const Eigen::Vector3d p3 = p1.cross(p2);
  Matrix3d R;
  R.col(0) = p1;
  R.col(1) = p2;
  R.col(2) = p3;
  return R;
}

namespace {

ReferenceCommand latched_command(const Pose6& x_ref, const Eigen::Vector3d& p1,
                                 const Eigen::Vector3d& seed_u,
                                 const StrategyGains& g) {
  ReferenceCommand cmd;
  cmd.mode = CommandMode::Coupled;
  cmd.x_ref = x_ref;
  cmd.R_WP = principal_frame(p1, seed_u);
  cmd.k_p = Vector6d::Zero();
  cmd.k_p[0] = g.k_p1;
  cmd.d_p = g.d_stable;
  cmd.d_p[0] = critical_damping(g.k_p1, g.m_p[0]);
  return cmd;
}

}  // namespace

ReferenceCommand free_command(const Pose6& ee_pose, const StrategyGains& g) {
  ReferenceCommand cmd;
  cmd.mode = CommandMode::Free;
  cmd.x_ref = ee_pose;  // for logging; no stiffness acts on it
  cmd.R_WP = Matrix3d::Identity();
  cmd.k_p = Vector6d::Zero();
  cmd.d_p = g.d_stable;
  return cmd;
}

ReferenceCommand fsa_reference(const BalanceStateMachine& sm,
                               const Pose6& ee_pose, const StrategyGains& g) {
  const Pose6& x_star = sm.latched_pose();
  const Eigen::Vector3d dr = ee_pose.position - x_star.position;
  Eigen::Vector3d p1;
  if (dr.norm() < 1e-4) {
    p1 = Eigen::Vector3d::Zero();
    p1[sm.mirror().axis] = sm.mirror().outward;
  } else {
    p1 = dr.normalized();
  }
  return latched_command(x_star, p1, sm.episode_direction_seed(), g);
}

ReferenceCommand mba_reference(const BalanceStateMachine& sm,
                               const Eigen::Vector2d& cop, const Pose6& ee_pose,
                               const StrategyGains& g) {
  const MirrorLine& m = sm.mirror();
  const double delta = std::abs(cop[m.axis] - m.offset);

  Eigen::Vector2d cop_mirrored = cop;
  cop_mirrored[m.axis] = 2.0 * m.offset - cop[m.axis];

  Eigen::Vector3d p1 = Eigen::Vector3d::Zero();
  if (delta < 1e-6) {
    // condition {1}: CoP on the line, zero-length reference offset
    p1[m.axis] = -m.outward;
    Pose6 x_ref = ee_pose;
    return latched_command(x_ref, p1, sm.episode_direction_seed(), g);
  }
  const Eigen::Vector2d diff = cop_mirrored - cop;
  p1.head<2>() = diff / diff.norm();

  Pose6 x_ref = ee_pose;
  x_ref.position += 2.0 * delta * p1;
  return latched_command(x_ref, p1, sm.episode_direction_seed(), g);
}

ReferenceCommand hwa_reference(const Pose6& ee_pose, double z_threshold,
                               const StrategyGains& g) {
  if (ee_pose.position.z() >= z_threshold) {
    return free_command(ee_pose, g);
  }
  ReferenceCommand cmd;
  cmd.mode = CommandMode::Coupled;
  cmd.x_ref = ee_pose;
  cmd.x_ref.position.z() = z_threshold;
  Matrix3d R;  // p1 = z, p2 = x, p3 = p1 x p2 = y
  R.col(0) = Eigen::Vector3d::UnitZ();
  R.col(1) = Eigen::Vector3d::UnitX();
  R.col(2) = Eigen::Vector3d::UnitY();
  cmd.R_WP = R;
  cmd.k_p = Vector6d::Zero();
  cmd.k_p[0] = g.k_p1;
  cmd.d_p = g.d_stable;
  cmd.d_p[0] = critical_damping(g.k_p1, g.m_p[0]);
  return cmd;
}

ReferenceGenerator::ReferenceGenerator(StrategyKind kind, const StrategyGains& gains,
                                       std::uint64_t seed)
    : kind_(kind), gains_(gains), sm_(seed) {}

ReferenceCommand ReferenceGenerator::update(const Eigen::Vector2d& cop,
                                            const SupportRegion& region,
                                            const Pose6& ee_pose) {
  if (!z_latched_) {
    z_threshold_ = ee_pose.position.z() - gains_.hwa_wall_clearance;
    z_latched_ = true;
  }
  if (kind_ == StrategyKind::HWA) {
    return hwa_reference(ee_pose, z_threshold_, gains_);
  }
  sm_.update(cop, region, ee_pose);
  if (!sm_.unstable()) return free_command(ee_pose, gains_);
  if (kind_ == StrategyKind::FSA) return fsa_reference(sm_, ee_pose, gains_);
  return mba_reference(sm_, cop, ee_pose, gains_);
}

}  // namespace balance_assist
