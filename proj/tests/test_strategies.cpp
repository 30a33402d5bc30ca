#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "balance_assist/admittance.hpp"
#include "balance_assist/strategies.hpp"

#include <random>

using namespace balance_assist;

namespace {

SupportRegion make_region() {
  SupportRegion r;
  r.dz.lo = Eigen::Vector2d(-0.05, -0.10);
  r.dz.hi = Eigen::Vector2d(0.12, 0.10);
  r.sp.lo = r.dz.lo - Eigen::Vector2d(0.06, 0.05);
  r.sp.hi = r.dz.hi + Eigen::Vector2d(0.08, 0.05);
  return r;
}

Pose6 ee_at(double x, double z) {
  Pose6 p;
  p.position << x, 0.0, z;
  return p;
}

}  // namespace

TEST_CASE("state machine: stays stable inside, latches on exit, clears on re-entry") {
  const SupportRegion r = make_region();
  BalanceStateMachine sm(1);

  sm.update({0.0, 0.0}, r, ee_at(0.5, 1.0));
  sm.update({0.05, 0.0}, r, ee_at(0.51, 1.0));
  CHECK_FALSE(sm.unstable());

  sm.update({0.13, 0.0}, r, ee_at(0.52, 1.0));
  CHECK(sm.unstable());
  CHECK(sm.mirror().axis == 0);
  CHECK(sm.mirror().offset == doctest::Approx(0.12));
  CHECK(sm.mirror().outward == doctest::Approx(1.0));
  CHECK(sm.latched_pose().position.x() == doctest::Approx(0.52));

  sm.update({0.10, 0.0}, r, ee_at(0.50, 1.0));
  CHECK_FALSE(sm.unstable());

  // second exit through the back border replaces the latch
  sm.update({-0.06, 0.0}, r, ee_at(0.47, 1.0));
  CHECK(sm.unstable());
  CHECK(sm.mirror().offset == doctest::Approx(-0.05));
  CHECK(sm.mirror().outward == doctest::Approx(-1.0));
  CHECK(sm.latched_pose().position.x() == doctest::Approx(0.47));
}

TEST_CASE("state machine: corner exits pick the face along the CoP velocity") {
  const SupportRegion r = make_region();
  BalanceStateMachine sm(2);
  sm.update({0.11, 0.09}, r, ee_at(0.5, 1.0));
  sm.update({0.13, 0.12}, r, ee_at(0.5, 1.0));  // crossed both front and left faces
  CHECK(sm.unstable());
  CHECK(sm.mirror().axis == 1);  // velocity mostly along +y
  CHECK(sm.mirror().offset == doctest::Approx(0.10));
}

TEST_CASE("fsa: p1 is the normalized displacement from x*") {
  const SupportRegion r = make_region();
  StrategyGains g;
  BalanceStateMachine sm(3);
  sm.update({0.13, 0.0}, r, ee_at(0.5, 1.0));
  REQUIRE(sm.unstable());

  Pose6 ee = ee_at(0.5, 1.0);
  ee.position += Eigen::Vector3d(0.08, 0.0, 0.02);
  const ReferenceCommand cmd = fsa_reference(sm, ee, g);
  CHECK(cmd.mode == CommandMode::Coupled);
  CHECK((cmd.x_ref.position - Eigen::Vector3d(0.5, 0.0, 1.0)).norm() < 1e-12);
  const Eigen::Vector3d p1 = cmd.R_WP.col(0);
  CHECK(p1.x() == doctest::Approx(0.970).epsilon(1e-3));
  CHECK(p1.y() == doctest::Approx(0.0));
  CHECK(p1.z() == doctest::Approx(0.243).epsilon(2e-3));
  CHECK(cmd.k_p[0] == doctest::Approx(g.k_p1));
  CHECK(cmd.k_p.tail<5>().norm() == 0.0);
  CHECK(cmd.d_p[0] == doctest::Approx(critical_damping(g.k_p1, g.m_p[0])));

  SUBCASE("steady spring force is -k dr") {
    const Eigen::Vector3d dr = ee.position - cmd.x_ref.position;
    const Matrix6d K = rotate_to_world(cmd.k_p, cmd.R_WP);
    const Eigen::Vector3d f_on_ee = (-K * pose_error(ee, cmd.x_ref)).head<3>();
    CHECK((f_on_ee + g.k_p1 * dr).norm() < 1e-9);
  }
}

TEST_CASE("fsa: degenerate displacement falls back to the latched border normal") {
  const SupportRegion r = make_region();
  StrategyGains g;
  BalanceStateMachine sm(4);
  const Pose6 ee = ee_at(0.5, 1.0);
  sm.update({0.125, 0.0}, r, ee);
  const ReferenceCommand cmd = fsa_reference(sm, ee, g);
  CHECK((cmd.R_WP.col(0) - Eigen::Vector3d::UnitX()).norm() < 1e-12);
}

TEST_CASE("principal frames are orthonormal right-handed over 1000 seeds") {
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    BalanceStateMachine sm(static_cast<std::uint64_t>(k));
    const SupportRegion r = make_region();
    sm.update({0.13, 0.0}, r, ee_at(0.5, 1.0));
    Eigen::Vector3d p1(u(rng), u(rng), u(rng));
    if (p1.norm() < 1e-3) p1 = Eigen::Vector3d::UnitX();
    p1.normalize();
    const Matrix3d R = principal_frame(p1, sm.episode_direction_seed());
    CHECK((R * R.transpose() - Matrix3d::Identity()).norm() < 1e-9);
    CHECK(R.determinant() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK((R.col(0) - p1).norm() < 1e-12);
    CHECK((R.col(2) - R.col(0).cross(R.col(1))).norm() < 1e-12);
  }
}

TEST_CASE("mba: reflection geometry and Eq.-style reference") {
  const SupportRegion r = make_region();
  StrategyGains g;
  BalanceStateMachine sm(6);
  sm.update({0.121, 0.0}, r, ee_at(0.6, 1.0));
  REQUIRE(sm.unstable());

  const Eigen::Vector2d cop(0.17, 0.0);
  const Pose6 ee = ee_at(0.6, 1.0);
  const ReferenceCommand cmd = mba_reference(sm, cop, ee, g);
  // mirrored CoP (0.07, 0), delta 0.05, p1 = -x
  CHECK((cmd.R_WP.col(0) - Eigen::Vector3d(-1, 0, 0)).norm() < 1e-12);
  CHECK((cmd.x_ref.position - Eigen::Vector3d(0.5, 0.0, 1.0)).norm() < 1e-12);

  SUBCASE("offset length is exactly 2 delta and p1 is horizontal") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.1205, 0.25);
    for (int k = 0; k < 200; ++k) {
      const Eigen::Vector2d c(u(rng), 0.3 * (u(rng) - 0.18));
      const double delta = std::abs(c.x() - 0.12);
      const ReferenceCommand m = mba_reference(sm, c, ee, g);
      CHECK(std::abs((m.x_ref.position - ee.position).norm() - 2.0 * delta) < 1e-12);
      CHECK(m.R_WP.col(0).z() == 0.0);
    }
  }

  SUBCASE("reflecting twice is the identity") {
    const double line = sm.mirror().offset;
    const double mirrored = 2.0 * line - cop.x();
    CHECK(2.0 * line - mirrored == doctest::Approx(cop.x()).epsilon(1e-15));
  }

  SUBCASE("reference collapses to the EE as the CoP returns to the border") {
    const ReferenceCommand m = mba_reference(sm, {0.12 + 1e-9, 0.0}, ee, g);
    CHECK((m.x_ref.position - ee.position).norm() < 1e-6);
  }
}

TEST_CASE("hwa: wall only below the threshold, z-only stiffness") {
  StrategyGains g;
  const double z_star = 1.00;

  const ReferenceCommand above = hwa_reference(ee_at(0.5, 1.05), z_star, g);
  CHECK(above.mode == CommandMode::Free);
  CHECK(above.k_p.norm() == 0.0);

  const ReferenceCommand below = hwa_reference(ee_at(0.5, 0.95), z_star, g);
  CHECK(below.mode == CommandMode::Coupled);
  CHECK(below.x_ref.position.z() == doctest::Approx(z_star));
  CHECK(below.x_ref.position.x() == doctest::Approx(0.5));
  const Matrix6d K = rotate_to_world(below.k_p, below.R_WP);
  // steady-state force: k * 0.05 upward, none horizontally
  const Vector6d f = -K * pose_error(ee_at(0.5, 0.95), below.x_ref);
  CHECK(f[2] == doctest::Approx(g.k_p1 * 0.05));
  CHECK(std::abs(f[0]) < 1e-12);
  CHECK(std::abs(f[1]) < 1e-12);

  // horizontal motion below the wall is unopposed by stiffness
  const Vector6d f2 = -K * pose_error(ee_at(0.8, 0.95), below.x_ref);
  CHECK(f2[0] == doctest::Approx(0.0));
}

TEST_CASE("every strategy commands rank<=1 translational, zero rotational stiffness") {
  const SupportRegion r = make_region();
  StrategyGains g;
  for (StrategyKind kind : {StrategyKind::FSA, StrategyKind::MBA, StrategyKind::HWA}) {
    ReferenceGenerator gen(kind, g, 17);
    gen.update({0.0, 0.0}, r, ee_at(0.5, 1.0));
    // drive outside, then below the wall for HWA
    const ReferenceCommand cmd = gen.update({0.14, 0.0}, r, ee_at(0.52, 0.93));
    CHECK(cmd.k_p.tail<5>().norm() == 0.0);
    CHECK(cmd.k_p[0] >= 0.0);
  }
}

TEST_CASE("inside the DZ all strategies produce the identical free command") {
  const SupportRegion r = make_region();
  StrategyGains g;
  const Pose6 ee = ee_at(0.5, 1.0);
  ReferenceCommand cmds[3];
  int i = 0;
  for (StrategyKind kind : {StrategyKind::FSA, StrategyKind::MBA, StrategyKind::HWA}) {
    ReferenceGenerator gen(kind, g, 23);
    cmds[i++] = gen.update({0.02, 0.01}, r, ee);
  }
  for (int k = 0; k < 3; ++k) {
    CHECK(cmds[k].mode == CommandMode::Free);
    CHECK(cmds[k].k_p.norm() == 0.0);
    CHECK((cmds[k].d_p - cmds[0].d_p).norm() == 0.0);
    CHECK((cmds[k].R_WP - Matrix3d::Identity()).norm() == 0.0);
  }
}

TEST_CASE("fsa reference stays latched while unstable") {
  const SupportRegion r = make_region();
  StrategyGains g;
  BalanceStateMachine sm(41);
  sm.update({0.13, 0.0}, r, ee_at(0.5, 1.0));
  const ReferenceCommand a = fsa_reference(sm, ee_at(0.55, 0.98), g);
  const ReferenceCommand b = fsa_reference(sm, ee_at(0.61, 0.93), g);
  CHECK((a.x_ref.position - b.x_ref.position).norm() == 0.0);
  CHECK((a.x_ref.position - Eigen::Vector3d(0.5, 0.0, 1.0)).norm() < 1e-12);
}

TEST_CASE("spring force is continuous through the DZ border") {
  const SupportRegion r = make_region();
  StrategyGains g;
  for (StrategyKind kind : {StrategyKind::FSA, StrategyKind::MBA}) {
    ReferenceGenerator gen(kind, g, 29);
    const Pose6 ee = ee_at(0.5, 1.0);
    gen.update({0.119, 0.0}, r, ee);
    const double eps = 1e-5;
    const ReferenceCommand cmd = gen.update({0.12 + eps, 0.0}, r, ee);
    const Matrix6d K = rotate_to_world(cmd.k_p, cmd.R_WP);
    const Vector6d f = K * pose_error(cmd.x_ref, ee);
    CHECK(f.norm() <= g.k_p1 * 2.0 * eps + 1e-9);
  }
}
