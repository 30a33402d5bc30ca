#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "balance_assist/experiment.hpp"
#include "balance_assist/io.hpp"
#include "oracles.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace balance_assist;

namespace {

// synthetic log with a prescribed CoP arc; everything else flat
TrialLog synthetic_log(const std::vector<double>& cop, double dt = 0.01,
                       double dz_lo = -0.05, double dz_hi = 0.12,
                       std::vector<Phase> phases = {}) {
  TrialLog log;
  log.region.dz.lo = Eigen::Vector2d(dz_lo, -0.1);
  log.region.dz.hi = Eigen::Vector2d(dz_hi, 0.1);
  log.region.sp.lo = log.region.dz.lo - Eigen::Vector2d(0.05, 0.05);
  log.region.sp.hi = log.region.dz.hi + Eigen::Vector2d(0.05, 0.05);
  log.subject_weight = 654.3;
  for (std::size_t i = 0; i < cop.size(); ++i) {
    log.t.push_back(static_cast<double>(i) * dt);
    log.cop_x.push_back(cop[i]);
    log.cop_y.push_back(0.0);
    log.dz_lo.push_back(dz_lo);
    log.dz_hi.push_back(dz_hi);
    log.f_x.push_back(0.0);
    log.f_y.push_back(0.0);
    log.f_z.push_back(0.0);
    log.ee_x.push_back(0.5);
    log.ee_z.push_back(1.0);
    log.ref_x.push_back(0.5);
    log.ref_z.push_back(1.0);
    log.elbow.push_back(-0.8);
    log.voluntary.push_back(0.0);
    log.phase.push_back(phases.empty() ? Phase::Lean : phases[i]);
  }
  return log;
}

AppConfig fast_config() {
  AppConfig cfg = AppConfig::defaults();
  cfg.campaign.subjects = 2;
  cfg.campaign.trials_per_strategy = 2;
  cfg.campaign.parallel = false;
  return cfg;
}

}  // namespace

TEST_CASE("metric_time_outside") {
  // out at t=1.0, back in at t=3.5
  std::vector<double> cop;
  for (int i = 0; i <= 400; ++i) {
    const double t = i * 0.01;
    cop.push_back((t >= 1.0 && t < 3.5) ? 0.15 : 0.0);
  }
  const TrialLog log = synthetic_log(cop);
  CHECK(metric_time_outside(log).value() == doctest::Approx(2.5));

  SUBCASE("never exits: undefined") {
    const TrialLog quiet = synthetic_log(std::vector<double>(100, 0.0));
    CHECK_FALSE(metric_time_outside(quiet).has_value());
  }

  SUBCASE("failed trial: undefined") {
    std::vector<Phase> phases(cop.size(), Phase::Lean);
    phases.back() = Phase::Stepped;
    const TrialLog failed = synthetic_log(cop, 0.01, -0.05, 0.12, phases);
    CHECK_FALSE(metric_time_outside(failed).has_value());
    CHECK(compute_result(failed).failed);
  }
}

TEST_CASE("metric_max_distance equals a brute-force scan") {
  std::vector<double> cop;
  for (int i = 0; i <= 300; ++i) {
    const double t = i * 0.01;
    cop.push_back(0.12 + 0.07 * std::sin(M_PI * t / 3.0));  // arc out and back
  }
  cop.push_back(0.0);  // re-enter
  const TrialLog log = synthetic_log(cop);
  double brute = 0.0;
  for (std::size_t i = 0; i < log.size(); ++i)
    brute = std::max(brute, oracles::rect_distance({log.cop_x[i], 0.0},
                                                   log.region.dz.lo, log.region.dz.hi));
  CHECK(metric_max_distance(log).value() == doctest::Approx(brute).epsilon(1e-12));

  SUBCASE("single-sample excursion") {
    std::vector<double> one(50, 0.0);
    one[25] = 0.19;
    const TrialLog l = synthetic_log(one);
    CHECK(metric_max_distance(l).value() == doctest::Approx(0.07));
  }

  SUBCASE("no excursion: undefined") {
    const TrialLog l = synthetic_log(std::vector<double>(50, 0.0));
    CHECK_FALSE(metric_max_distance(l).has_value());
  }
}

TEST_CASE("metric_max_force windows and normalization") {
  std::vector<double> cop(400, 0.0);
  for (int i = 100; i < 250; ++i) cop[static_cast<size_t>(i)] = 0.15;
  TrialLog log = synthetic_log(cop);
  // 30 N peak inside the window, larger spike outside it
  log.f_x[150] = 30.0;
  log.f_x[300] = 80.0;
  const double pct = metric_max_force(log, 654.3, 0);
  CHECK(pct == doctest::Approx(30.0 / 654.3 * 100.0));
  CHECK(pct == doctest::Approx(4.59).epsilon(1e-3));

  SUBCASE("zero force is 0%") {
    const TrialLog l = synthetic_log(cop);
    CHECK(metric_max_force(l, 654.3, 0) == 0.0);
  }

  SUBCASE("failure truncates the window at t_fail") {
    std::vector<Phase> phases(cop.size(), Phase::Lean);
    for (std::size_t i = 200; i < phases.size(); ++i) phases[i] = Phase::Stepped;
    TrialLog failed = synthetic_log(cop, 0.01, -0.05, 0.12, phases);
    failed.f_x[150] = 30.0;
    failed.f_x[220] = 90.0;  // after t_fail: excluded
    const double p_trunc = metric_max_force(failed, 654.3, 0);
    // full-window oracle differs because the larger late force is dropped
    double full = 0.0;
    for (std::size_t i = 100; i < failed.size(); ++i)
      full = std::max(full, std::abs(failed.f_x[i]));
    CHECK(p_trunc == doctest::Approx(30.0 / 654.3 * 100.0));
    CHECK(full / 654.3 * 100.0 > p_trunc);
  }
}

TEST_CASE("sign test exact values") {
  auto diffs = [](int pos, int neg) {
    std::vector<double> d;
    for (int i = 0; i < pos; ++i) d.push_back(1.0);
    for (int i = 0; i < neg; ++i) d.push_back(-1.0);
    return d;
  };
  CHECK(sign_test(diffs(12, 0)) == doctest::Approx(2.0 / 4096.0).epsilon(1e-12));
  CHECK(sign_test(diffs(9, 3)) == doctest::Approx(598.0 / 4096.0).epsilon(1e-12));
  CHECK(sign_test(diffs(6, 6)) == doctest::Approx(1.0));
  CHECK(sign_test({}) == doctest::Approx(1.0));
  CHECK(sign_test({0.0, 0.0, 1.0}) == doctest::Approx(1.0));  // ties dropped

  SUBCASE("matches the enumeration oracle for all n <= 20") {
    for (int n = 1; n <= 20; ++n)
      for (int k = 0; k <= n; ++k)
        CHECK(sign_test(diffs(k, n - k)) ==
              doctest::Approx(oracles::sign_test_enumeration(k, n - k)).epsilon(1e-12));
  }
}

TEST_CASE("closed loop: MBA recovers without voluntary force, HWA steps") {
  const AppConfig cfg = AppConfig::defaults();

  SUBCASE("MBA FWD") {
    const auto [res, log] =
        run_trial(make_trial_config(cfg, StrategyKind::MBA, Direction::FWD, 5));
    CHECK_FALSE(res.failed);
    CHECK(res.time_outside.has_value());
    CHECK(res.max_voluntary == 0.0);
  }

  SUBCASE("HWA BWD") {
    const auto [res, log] =
        run_trial(make_trial_config(cfg, StrategyKind::HWA, Direction::BWD, 5));
    CHECK(res.failed);
    CHECK(res.t_fail.has_value());
    CHECK_FALSE(res.time_outside.has_value());
  }

  SUBCASE("identical seeds give bitwise-identical logs") {
    const TrialConfig tc = make_trial_config(cfg, StrategyKind::FSA, Direction::FWD, 9);
    const auto [r1, l1] = run_trial(tc);
    const auto [r2, l2] = run_trial(tc);
    REQUIRE(l1.size() == l2.size());
    CHECK(l1.cop_x == l2.cop_x);
    CHECK(l1.f_x == l2.f_x);
    CHECK(l1.ee_x == l2.ee_x);
    CHECK(l1.elbow == l2.elbow);
  }
}

TEST_CASE("log timestamps are strictly increasing with a constant period") {
  const AppConfig cfg = AppConfig::defaults();
  for (StrategyKind s : {StrategyKind::MBA, StrategyKind::HWA}) {
    const auto [res, log] = run_trial(make_trial_config(cfg, s, Direction::FWD, 11));
    REQUIRE(log.size() > 2);
    const double period = log.t[1] - log.t[0];
    for (std::size_t i = 1; i < log.size(); ++i) {
      CHECK(log.t[i] > log.t[i - 1]);
      CHECK(log.t[i] - log.t[i - 1] == doctest::Approx(period).epsilon(1e-9));
    }
  }
}

TEST_CASE("optional stiffness ramp keeps the MBA recovery intact") {
  AppConfig cfg = AppConfig::defaults();
  cfg.sim.stiffness_ramp = true;
  const auto [res, log] =
      run_trial(make_trial_config(cfg, StrategyKind::MBA, Direction::FWD, 5));
  CHECK_FALSE(res.failed);
  CHECK(res.time_outside.has_value());
  CHECK(res.max_voluntary == 0.0);
}

TEST_CASE("results recompute exactly from a persisted log") {
  const AppConfig cfg = AppConfig::defaults();
  const auto [res, log] =
      run_trial(make_trial_config(cfg, StrategyKind::FSA, Direction::FWD, 3));
  const std::string path = "/tmp/ba_roundtrip_test.csv";
  write_trial_csv(log, path);
  TrialLog back = read_trial_csv(path);
  back.subject_weight = log.subject_weight;
  const TrialResult again = compute_result(back);
  CHECK(again.failed == res.failed);
  CHECK(again.time_outside == res.time_outside);
  CHECK(again.max_distance == res.max_distance);
  CHECK(again.f_max_x == res.f_max_x);
  CHECK(again.f_max_z == res.f_max_z);
  std::remove(path.c_str());
}

TEST_CASE("campaign: identical subjects and no jitter give zero std") {
  AppConfig cfg = fast_config();
  cfg.campaign.mass_sd = 0.0;
  cfg.campaign.height_sd = 0.0;
  cfg.campaign.subject_defect_jitter = 0.0;
  cfg.campaign.subject_lean_jitter = 0.0;
  cfg.campaign.subject_dz_jitter = 0.0;
  cfg.campaign.trial_defect_jitter = 0.0;
  cfg.campaign.trial_lean_jitter = 0.0;
  const CampaignResult r = run_campaign(cfg, "/tmp/ba_camp_std0", false);
  for (StrategyKind s : {StrategyKind::FSA, StrategyKind::MBA}) {
    for (Direction d : {Direction::FWD, Direction::BWD}) {
      const CellStats& c = r.cell(s, d);
      if (c.dt_std) CHECK(*c.dt_std == doctest::Approx(0.0));
      if (c.dmax_std) CHECK(*c.dmax_std == doctest::Approx(0.0));
      CHECK(c.fx_std == doctest::Approx(0.0));
      CHECK(c.fz_std == doctest::Approx(0.0));
    }
  }
}

TEST_CASE("campaign aggregates match a brute-force recomputation") {
  const AppConfig cfg = fast_config();
  const CampaignResult r = run_campaign(cfg, "/tmp/ba_camp_oracle", false);
  for (StrategyKind s : {StrategyKind::FSA, StrategyKind::MBA, StrategyKind::HWA}) {
    for (Direction d : {Direction::FWD, Direction::BWD}) {
      std::vector<double> dts, fxs;
      int n = 0, failed = 0;
      for (const auto& t : r.trials) {
        if (t.strategy != s || t.direction != d) continue;
        ++n;
        failed += t.result.failed ? 1 : 0;
        if (t.result.time_outside) dts.push_back(*t.result.time_outside);
        if (t.result.t_out) fxs.push_back(t.result.f_max_x);
      }
      const CellStats& c = r.cell(s, d);
      CHECK(c.n_trials == n);
      CHECK(c.n_failed == failed);
      if (!dts.empty()) {
        double m = 0.0;
        for (double v : dts) m += v;
        m /= static_cast<double>(dts.size());
        CHECK(c.dt_mean.value() == doctest::Approx(m).epsilon(1e-12));
      }
      if (!fxs.empty()) {
        double m = 0.0;
        for (double v : fxs) m += v;
        m /= static_cast<double>(fxs.size());
        CHECK(c.fx_mean == doctest::Approx(m).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("campaign determinism under a fixed master seed") {
  const AppConfig cfg = fast_config();
  const CampaignResult a = run_campaign(cfg, "/tmp/ba_camp_det_a", true);
  const CampaignResult b = run_campaign(cfg, "/tmp/ba_camp_det_b", true);
  REQUIRE(a.trials.size() == b.trials.size());
  for (std::size_t i = 0; i < a.trials.size(); ++i) {
    CHECK(a.trials[i].result.failed == b.trials[i].result.failed);
    CHECK(a.trials[i].result.f_max_x == b.trials[i].result.f_max_x);
    CHECK(a.trials[i].result.time_outside == b.trials[i].result.time_outside);
  }
  // table CSVs byte-identical
  for (const char* name : {"table_results.csv", "failures.csv", "sign_tests.csv"}) {
    std::ifstream fa(std::string("/tmp/ba_camp_det_a/") + name);
    std::ifstream fb(std::string("/tmp/ba_camp_det_b/") + name);
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    CHECK(sa.str() == sb.str());
    CHECK(!sa.str().empty());
  }
}

TEST_CASE("table csv has the expected shape") {
  const AppConfig cfg = fast_config();
  run_campaign(cfg, "/tmp/ba_camp_shape", false);
  std::ifstream in("/tmp/ba_camp_shape/table_results.csv");
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);
  int commas = 0;
  for (char c : line) commas += c == ',' ? 1 : 0;
  CHECK(commas == 9);  // 2 key columns + 8 value columns
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 6);
}
