#include "balance_assist/experiment.hpp"

#include "balance_assist/admittance.hpp"
#include "balance_assist/io.hpp"
#include "balance_assist/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace balance_assist {

const char* direction_name(Direction d) {
  return d == Direction::FWD ? "FWD" : "BWD";
}

Direction direction_from_name(const std::string& s) {
  if (s == "FWD" || s == "fwd") return Direction::FWD;
  if (s == "BWD" || s == "bwd") return Direction::BWD;
  throw std::runtime_error("unknown direction: " + s);
}

TrialConfig make_trial_config(const AppConfig& cfg, StrategyKind strategy,
                              Direction direction, std::uint64_t seed) {
  TrialConfig t;
  t.strategy = strategy;
  t.direction = direction;
  t.human = cfg.human;
  t.behavior = cfg.behavior;
  t.calibration = cfg.calibration;
  t.kinematics = cfg.kinematics;
  t.hqp = cfg.hqp;
  t.gains = cfg.gains;
  t.sim = cfg.sim;
  t.seed = seed;
  return t;
}

namespace {

void push_sample(TrialLog& log, double t, const HumanState& hs,
                 const SupportRegion& region, const Wrench6& lam,
                 const Eigen::Vector3d& ee_pos, const Eigen::Vector3d& ref_pos,
                 double elbow, double voluntary, Phase phase) {
  log.t.push_back(quantize_g6(t));
  log.cop_x.push_back(quantize_g6(hs.cop.x()));
  log.cop_y.push_back(quantize_g6(hs.cop.y()));
  log.dz_lo.push_back(quantize_g6(region.dz.lo.x()));
  log.dz_hi.push_back(quantize_g6(region.dz.hi.x()));
  log.f_x.push_back(quantize_g6(lam[0]));
  log.f_y.push_back(quantize_g6(lam[1]));
  log.f_z.push_back(quantize_g6(lam[2]));
  log.ee_x.push_back(quantize_g6(ee_pos.x()));
  log.ee_z.push_back(quantize_g6(ee_pos.z()));
  log.ref_x.push_back(quantize_g6(ref_pos.x()));
  log.ref_z.push_back(quantize_g6(ref_pos.z()));
  log.elbow.push_back(quantize_g6(elbow));
  log.voluntary.push_back(quantize_g6(voluntary));
  log.phase.push_back(phase);
}

bool all_finite(const AdmittanceState& s) {
  return s.x_d.position.allFinite() && s.xdot_d.allFinite() &&
         s.x_d.orientation.coeffs().allFinite();
}

}  // namespace

std::pair<TrialResult, TrialLog> run_trial(const TrialConfig& cfg) {
  const HumanParams& human = cfg.human;
  const SupportRegion region = calibrate_dz(human, cfg.calibration.max_safe_lean_fwd,
                                            cfg.calibration.max_safe_lean_bwd);

  // Place the base so the handle sits at the subject's natural grasp point:
  // the handle height is fixed by the arm's preferred configuration, the
  // horizontal standoff follows from the preferred shoulder-hand distance.
  JointState q;
  q.base_pose = Eigen::Vector3d(0.0, 0.0, M_PI);
  q.arm_q = cfg.hqp.preferred_arm;
  const Pose6 p_nom = forward_kinematics(q, cfg.kinematics);
  const double z_handle = p_nom.position.z();
  const double d0 = 0.90 * (human.upper_arm_len() + human.forearm_len());
  const double dz_sh = human.shoulder_height() - z_handle;
  const double x_min = 0.25 * d0;
  const double x_e =
      std::sqrt(std::max(d0 * d0 - dz_sh * dz_sh, x_min * x_min));
  q.base_pose.x() += human.ankle.x() + x_e - p_nom.position.x();
  q.base_pose.y() += human.ankle.y() - p_nom.position.y();

  Pose6 ee = forward_kinematics(q, cfg.kinematics);
  const Eigen::Vector3d hand_home = ee.position;

  AdmittanceState adm_state;
  adm_state.x_d = ee;

  HumanState hs;
  hs.com = com_position(human, 0.0);
  hs.cop = cop_estimate(hs.com);
  hs.elbow = elbow_angle(shoulder_position(human, 0.0), ee.position,
                         human.upper_arm_len(), human.forearm_len());

  BehaviorPolicy policy(human, cfg.behavior, direction_sign(cfg.direction));
  ReferenceGenerator refgen(cfg.strategy, cfg.gains, cfg.seed);

  TrialLog log;
  // the log carries the region on the same print grid as its samples, so
  // metrics recomputed from a persisted CSV agree exactly
  log.region.dz.lo = region.dz.lo.unaryExpr(&quantize_g6);
  log.region.dz.hi = region.dz.hi.unaryExpr(&quantize_g6);
  log.region.sp.lo = region.sp.lo.unaryExpr(&quantize_g6);
  log.region.sp.hi = region.sp.hi.unaryExpr(&quantize_g6);
  log.subject_weight = human.weight();

  const double dt = cfg.sim.dt;
  const long n_steps = std::lround(cfg.sim.duration / dt);
  const int stride = std::max(1, cfg.sim.log_stride);
  long next_log = 0;

  Twist6 ee_vel = Twist6::Zero();
  std::optional<double> t_in;
  bool was_outside = false;
  bool prev_coupled = false;
  double episode_t0 = 0.0;

  for (long i = 0; i < n_steps; ++i) {
    const double t = static_cast<double>(i) * dt;
    ee = forward_kinematics(q, cfg.kinematics);

    ReferenceCommand cmd = refgen.update(hs.cop, region, ee);
    if (cfg.sim.stiffness_ramp && cmd.mode == CommandMode::Coupled) {
      if (!prev_coupled) episode_t0 = t;
      const double ramp = cfg.sim.stiffness_ramp_time > 0.0
                              ? std::min(1.0, (t - episode_t0) / cfg.sim.stiffness_ramp_time)
                              : 1.0;
      cmd.k_p *= ramp;
    }
    prev_coupled = cmd.mode == CommandMode::Coupled;

    double restoring = 0.0;
    if (cmd.mode == CommandMode::Coupled) {
      const Vector6d spring = rotate_to_world(cmd.k_p, cmd.R_WP) *
                              pose_error(cmd.x_ref, adm_state.x_d);
      restoring = spring.head<2>().dot(dz_recovery_direction(hs.cop, region));
    }

    const BehaviorPolicy::Output pol =
        policy.step(hs, t, cmd.mode == CommandMode::Coupled, restoring, region);
    hs.phase = pol.phase;

    const Wrench6 lam = grasp_wrench(hs, ee, ee_vel, human, hand_home,
                                     pol.voluntary_force);
    const double elbow = elbow_angle(shoulder_position(human, hs.lean), ee.position,
                                     human.upper_arm_len(), human.forearm_len());
    hs.elbow = elbow;

    if (pol.phase == Phase::Stepped) {
      // freeze the state at the moment of stepping; final sample lands on
      // the next log boundary to keep the sample period constant
      push_sample(log, static_cast<double>(next_log) * dt, hs, region, lam,
                  ee.position, cmd.x_ref.position, elbow,
                  pol.voluntary_force.norm(), pol.phase);
      break;
    }
    if (i == next_log) {
      push_sample(log, t, hs, region, lam, ee.position, cmd.x_ref.position, elbow,
                  pol.voluntary_force.norm(), pol.phase);
      next_log += stride;
    }

    // robot side
    PrincipalAdmittance adm;
    adm.m_p = cfg.gains.m_p;
    adm.d_p = cmd.d_p;
    adm.k_p = cmd.k_p;
    adm.R_WP = cmd.R_WP;
    adm_state = step_coupled(adm_state, lam, cmd.x_ref, adm, dt);

    const Twist6 xdot_star =
        clik_velocity(adm_state.x_d, adm_state.xdot_d, ee, cfg.hqp.clik_gain);
    const Matrix69d J = jacobian(q, cfg.kinematics);
    const HqpResult hqp = solve_hqp(J, xdot_star, q, cfg.hqp);
    ee_vel = J * hqp.qdot;
    q = integrate_joints(q, hqp.qdot, dt, cfg.kinematics, cfg.hqp.vel_limits);

    // human side: reaction of the measured wrench, applied at the hand
    hs = pendulum_step(hs, pol.tau_ankle, -lam, ee.position, human, dt);
    hs.phase = pol.phase;

    const bool outside = dz_distance(hs.cop, region) > 0.0;
    if (was_outside && !outside && !t_in) t_in = t;
    was_outside = outside;
    if (t_in && t - *t_in > cfg.sim.settle_tail) break;

    if ((i & 0xFF) == 0) {
      if (!std::isfinite(hs.lean) || !std::isfinite(hs.lean_rate) ||
          !all_finite(adm_state)) {
        std::ostringstream os;
        os << "run_trial: non-finite state at t=" << t
           << " (strategy " << strategy_name(cfg.strategy) << ", lean " << hs.lean
           << ")";
        throw std::runtime_error(os.str());
      }
    }
  }

  TrialResult res = compute_result(log);
  if (res.exit_episodes > 1) {
    std::cerr << "warning: trial re-exited the DZ " << res.exit_episodes
              << " times; indexes use the first episode\n";
  }
  return {res, log};
}

namespace {

struct Episode {
  std::optional<std::size_t> i_out, i_in, i_fail;
  int episodes = 0;
};

Episode find_episode(const TrialLog& log) {
  Episode e;
  bool outside_prev = false;
  for (std::size_t i = 0; i < log.size(); ++i) {
    const Eigen::Vector2d cop(log.cop_x[i], log.cop_y[i]);
    const bool outside = dz_distance(cop, log.region) > 0.0;
    if (outside && !outside_prev) {
      ++e.episodes;
      if (!e.i_out) e.i_out = i;
    }
    if (!outside && outside_prev && e.i_out && !e.i_in) e.i_in = i;
    if (log.phase[i] == Phase::Stepped && !e.i_fail) e.i_fail = i;
    outside_prev = outside;
  }
  return e;
}

}  // namespace

std::optional<double> metric_time_outside(const TrialLog& log) {
  const Episode e = find_episode(log);
  if (e.i_fail || !e.i_out || !e.i_in) return std::nullopt;
  return log.t[*e.i_in] - log.t[*e.i_out];
}

std::optional<double> metric_max_distance(const TrialLog& log) {
  const Episode e = find_episode(log);
  if (e.i_fail || !e.i_out || !e.i_in) return std::nullopt;
  double d = 0.0;
  for (std::size_t i = *e.i_out; i <= *e.i_in; ++i) {
    const Eigen::Vector2d cop(log.cop_x[i], log.cop_y[i]);
    d = std::max(d, dz_distance(cop, log.region));
  }
  return d;
}

double metric_max_force(const TrialLog& log, double subject_weight, int axis) {
  const Episode e = find_episode(log);
  if (!e.i_out) return 0.0;
  std::size_t last = log.size() - 1;
  if (e.i_fail) last = *e.i_fail;
  else if (e.i_in) last = *e.i_in;
  const std::vector<double>& f = axis == 0 ? log.f_x : (axis == 1 ? log.f_y : log.f_z);
  double m = 0.0;
  for (std::size_t i = *e.i_out; i <= last; ++i) m = std::max(m, std::abs(f[i]));
  return m / subject_weight * 100.0;
}

TrialResult compute_result(const TrialLog& log) {
  TrialResult r;
  const Episode e = find_episode(log);
  r.failed = e.i_fail.has_value();
  r.exit_episodes = e.episodes;
  if (e.i_out) r.t_out = log.t[*e.i_out];
  if (e.i_in) r.t_in = log.t[*e.i_in];
  if (e.i_fail) r.t_fail = log.t[*e.i_fail];
  r.time_outside = metric_time_outside(log);
  r.max_distance = metric_max_distance(log);
  r.f_max_x = metric_max_force(log, log.subject_weight, 0);
  r.f_max_z = metric_max_force(log, log.subject_weight, 2);
  for (double v : log.voluntary) r.max_voluntary = std::max(r.max_voluntary, v);
  return r;
}

double sign_test(const std::vector<double>& paired_diffs) {
  int pos = 0, neg = 0;
  for (double d : paired_diffs) {
    if (d > 0.0) ++pos;
    else if (d < 0.0) ++neg;
  }
  const int n = pos + neg;
  if (n == 0) return 1.0;
  const int m = std::min(pos, neg);
  // two-sided exact binomial: 2 * P(X <= m), X ~ B(n, 1/2)
  double tail = 0.0;
  double coeff = 1.0;  // C(n, 0)
  for (int i = 0; i <= m; ++i) {
    tail += coeff;
    coeff = coeff * (n - i) / (i + 1);
  }
  const double p = 2.0 * tail * std::pow(0.5, n);
  return std::min(p, 1.0);
}

void write_trial_csv(const TrialLog& log, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "t,cop_x,dz_lo,dz_hi,f_x,f_y,f_z,ee_x,ee_z,ref_x,ref_z,elbow,phase\n";
  for (std::size_t i = 0; i < log.size(); ++i) {
    out << format_g6(log.t[i]) << ',' << format_g6(log.cop_x[i]) << ','
        << format_g6(log.dz_lo[i]) << ',' << format_g6(log.dz_hi[i]) << ','
        << format_g6(log.f_x[i]) << ',' << format_g6(log.f_y[i]) << ','
        << format_g6(log.f_z[i]) << ',' << format_g6(log.ee_x[i]) << ','
        << format_g6(log.ee_z[i]) << ',' << format_g6(log.ref_x[i]) << ','
        << format_g6(log.ref_z[i]) << ',' << format_g6(log.elbow[i]) << ','
        << phase_name(log.phase[i]) << '\n';
  }
}

TrialLog read_trial_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty log file: " + path);
  const std::string expected =
      "t,cop_x,dz_lo,dz_hi,f_x,f_y,f_z,ee_x,ee_z,ref_x,ref_z,elbow,phase";
  if (line != expected)
    throw std::runtime_error("unexpected log header in " + path);
  TrialLog log;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 13)
      throw std::runtime_error("malformed log row in " + path);
    auto num = [&](int i) { return std::strtod(cells[static_cast<size_t>(i)].c_str(), nullptr); };
    log.t.push_back(num(0));
    log.cop_x.push_back(num(1));
    log.cop_y.push_back(0.0);
    log.dz_lo.push_back(num(2));
    log.dz_hi.push_back(num(3));
    log.f_x.push_back(num(4));
    log.f_y.push_back(num(5));
    log.f_z.push_back(num(6));
    log.ee_x.push_back(num(7));
    log.ee_z.push_back(num(8));
    log.ref_x.push_back(num(9));
    log.ref_z.push_back(num(10));
    log.elbow.push_back(num(11));
    log.voluntary.push_back(0.0);
    log.phase.push_back(phase_from_name(cells[12]));
  }
  if (log.size() == 0) throw std::runtime_error("log has no samples: " + path);
  // sagittal region reconstructed from the logged DZ bounds
  log.region.dz.lo = Eigen::Vector2d(log.dz_lo.front(), -1.0);
  log.region.dz.hi = Eigen::Vector2d(log.dz_hi.front(), 1.0);
  log.region.sp.lo = log.region.dz.lo - Eigen::Vector2d(1.0, 1.0);
  log.region.sp.hi = log.region.dz.hi + Eigen::Vector2d(1.0, 1.0);
  return log;
}

HumanParams sample_subject(const AppConfig& cfg, int subject_idx,
                           BehaviorConfig& behavior_out,
                           CalibrationParams& calibration_out) {
  const CampaignParams& cp = cfg.campaign;
  std::mt19937_64 rng(derive_seed(cp.master_seed, 0x5ab1ec7ULL, 1,
                                  static_cast<std::uint64_t>(subject_idx)));
  HumanParams h = cfg.human;
  h.mass = gauss_truncated(rng, cp.mass_mean, cp.mass_sd);
  h.height = gauss_truncated(rng, cp.height_mean, cp.height_sd);

  auto jitter = [&](double frac) {
    return 1.0 + frac * std::clamp(gauss(rng), -2.0, 2.0);
  };
  behavior_out = cfg.behavior;
  behavior_out.defect_torque *= jitter(cp.subject_defect_jitter);
  behavior_out.lean_rate *= jitter(cp.subject_lean_jitter);
  calibration_out = cfg.calibration;
  const double dzj = jitter(cp.subject_dz_jitter);
  calibration_out.max_safe_lean_fwd *= dzj;
  calibration_out.max_safe_lean_bwd *= dzj;
  return h;
}

namespace {

struct Agg {
  std::vector<double> dt, dmax, fx, fz;
  int n = 0, failed = 0;
};

std::pair<double, double> mean_std(const std::vector<double>& v) {
  if (v.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  if (v.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

}  // namespace

std::vector<std::optional<double>> subject_means(const CampaignResult& r,
                                                 const std::string& metric,
                                                 StrategyKind s, Direction d,
                                                 int n_subjects) {
  std::vector<std::vector<double>> per(static_cast<size_t>(n_subjects));
  for (const auto& rec : r.trials) {
    if (rec.strategy != s || rec.direction != d) continue;
    const TrialResult& t = rec.result;
    std::optional<double> v;
    if (metric == "dt_out") v = t.time_outside;
    else if (metric == "d_max") v = t.max_distance;
    else if (metric == "f_max_x") { if (!t.failed || t.t_out) v = t.f_max_x; }
    else if (metric == "f_max_z") { if (!t.failed || t.t_out) v = t.f_max_z; }
    else throw std::runtime_error("unknown metric: " + metric);
    if (v) per[static_cast<size_t>(rec.subject)].push_back(*v);
  }
  std::vector<std::optional<double>> out(static_cast<size_t>(n_subjects));
  for (int i = 0; i < n_subjects; ++i) {
    const auto& v = per[static_cast<size_t>(i)];
    if (!v.empty()) out[static_cast<size_t>(i)] = mean_std(v).first;
  }
  return out;
}

CampaignResult run_campaign(const AppConfig& cfg, const std::string& out_dir,
                            bool write_logs) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  const CampaignParams& cp = cfg.campaign;
  constexpr StrategyKind kStrategies[3] = {StrategyKind::FSA, StrategyKind::MBA,
                                           StrategyKind::HWA};

  struct Job {
    TrialConfig trial;
    CampaignTrialRecord rec;
    std::string log_path;
  };
  std::vector<Job> jobs;
  for (int subj = 0; subj < cp.subjects; ++subj) {
    BehaviorConfig beh;
    CalibrationParams cal;
    const HumanParams human = sample_subject(cfg, subj, beh, cal);
    for (int si = 0; si < 3; ++si) {
      for (int k = 0; k < cp.trials_per_strategy; ++k) {
        const Direction dir = (k % 2 == 0) ? Direction::FWD : Direction::BWD;
        Job j;
        j.trial = make_trial_config(cfg, kStrategies[si], dir,
                                    derive_seed(cp.master_seed,
                                                static_cast<std::uint64_t>(subj) + 1,
                                                static_cast<std::uint64_t>(si) + 1,
                                                static_cast<std::uint64_t>(k) + 1));
        j.trial.human = human;
        j.trial.behavior = beh;
        j.trial.calibration = cal;
        // per-trial variation, seeded by the trial id
        std::mt19937_64 trng(j.trial.seed);
        j.trial.behavior.defect_torque *=
            1.0 + cp.trial_defect_jitter * std::clamp(gauss(trng), -2.0, 2.0);
        j.trial.behavior.lean_rate *=
            1.0 + cp.trial_lean_jitter * std::clamp(gauss(trng), -2.0, 2.0);
        j.rec.subject = subj;
        j.rec.strategy = kStrategies[si];
        j.rec.direction = dir;
        j.rec.trial_index = k;
        char name[96];
        std::snprintf(name, sizeof(name), "trial_s%02d_%s_%s_%d.csv", subj,
                      strategy_name(kStrategies[si]), direction_name(dir), k);
        j.log_path = (fs::path(out_dir) / name).string();
        jobs.push_back(std::move(j));
      }
    }
  }

  std::vector<TrialResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      auto [res, log] = run_trial(jobs[i].trial);
      if (write_logs) write_trial_csv(log, jobs[i].log_path);
      results[i] = res;
    }
  };
  if (cp.parallel) {
    const unsigned n_threads =
        std::max(1u, std::min(std::thread::hardware_concurrency(),
                              static_cast<unsigned>(jobs.size())));
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  } else {
    worker();
  }

  CampaignResult out;
  Agg agg[3][2];
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    CampaignTrialRecord rec = jobs[i].rec;
    rec.result = results[i];
    const int si = static_cast<int>(rec.strategy);
    const int di = static_cast<int>(rec.direction);
    Agg& a = agg[si][di];
    ++a.n;
    if (rec.result.failed) ++a.failed;
    if (rec.result.time_outside) a.dt.push_back(*rec.result.time_outside);
    if (rec.result.max_distance) a.dmax.push_back(*rec.result.max_distance);
    if (rec.result.t_out) {
      a.fx.push_back(rec.result.f_max_x);
      a.fz.push_back(rec.result.f_max_z);
    }
    out.trials.push_back(std::move(rec));
  }
  for (int si = 0; si < 3; ++si) {
    for (int di = 0; di < 2; ++di) {
      const Agg& a = agg[si][di];
      CellStats c;
      c.n_trials = a.n;
      c.n_failed = a.failed;
      if (!a.dt.empty()) {
        const auto [m, s] = mean_std(a.dt);
        c.dt_mean = m;
        c.dt_std = s;
      }
      if (!a.dmax.empty()) {
        const auto [m, s] = mean_std(a.dmax);
        c.dmax_mean = m;
        c.dmax_std = s;
      }
      const auto [fxm, fxs] = mean_std(a.fx);
      c.fx_mean = fxm;
      c.fx_std = fxs;
      const auto [fzm, fzs] = mean_std(a.fz);
      c.fz_mean = fzm;
      c.fz_std = fzs;
      out.cells[static_cast<size_t>(si)][static_cast<size_t>(di)] = c;
    }
  }

  // pairwise sign tests on per-subject means
  const char* metrics[4] = {"dt_out", "d_max", "f_max_x", "f_max_z"};
  const std::pair<StrategyKind, StrategyKind> pairs[3] = {
      {StrategyKind::FSA, StrategyKind::MBA},
      {StrategyKind::FSA, StrategyKind::HWA},
      {StrategyKind::MBA, StrategyKind::HWA}};
  for (const char* metric : metrics) {
    for (Direction d : {Direction::FWD, Direction::BWD}) {
      for (const auto& [a, b] : pairs) {
        const auto ma = subject_means(out, metric, a, d, cp.subjects);
        const auto mb = subject_means(out, metric, b, d, cp.subjects);
        std::vector<double> diffs;
        SignTestEntry e;
        for (int i = 0; i < cp.subjects; ++i) {
          const auto& va = ma[static_cast<size_t>(i)];
          const auto& vb = mb[static_cast<size_t>(i)];
          if (va && vb) {
            diffs.push_back(*va - *vb);
            if (*va > *vb) ++e.n_pos;
            else if (*va < *vb) ++e.n_neg;
          }
        }
        if (diffs.empty()) continue;
        e.metric = metric;
        e.direction = d;
        e.a = a;
        e.b = b;
        e.p_value = sign_test(diffs);
        out.sign_tests.push_back(std::move(e));
      }
    }
  }

  write_campaign_csvs(out, out_dir);
  return out;
}

void write_campaign_csvs(const CampaignResult& r, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  {
    std::ofstream out(fs::path(out_dir) / "table_results.csv");
    out << "direction,strategy,dt_out_mean_s,dt_out_std_s,d_max_mean_cm,"
           "d_max_std_cm,f_max_x_mean_pct,f_max_x_std_pct,f_max_z_mean_pct,"
           "f_max_z_std_pct\n";
    for (Direction d : {Direction::FWD, Direction::BWD}) {
      for (StrategyKind s : {StrategyKind::HWA, StrategyKind::FSA, StrategyKind::MBA}) {
        const CellStats& c = r.cell(s, d);
        auto opt = [](const std::optional<double>& v, double scale) {
          return v ? format_g6(*v * scale) : std::string();
        };
        out << direction_name(d) << ',' << strategy_name(s) << ','
            << opt(c.dt_mean, 1.0) << ',' << opt(c.dt_std, 1.0) << ','
            << opt(c.dmax_mean, 100.0) << ',' << opt(c.dmax_std, 100.0) << ','
            << format_g6(c.fx_mean) << ',' << format_g6(c.fx_std) << ','
            << format_g6(c.fz_mean) << ',' << format_g6(c.fz_std) << '\n';
      }
    }
  }
  {
    std::ofstream out(fs::path(out_dir) / "failures.csv");
    out << "direction,strategy,n_trials,n_failed,failure_rate\n";
    for (Direction d : {Direction::FWD, Direction::BWD}) {
      for (StrategyKind s : {StrategyKind::HWA, StrategyKind::FSA, StrategyKind::MBA}) {
        const CellStats& c = r.cell(s, d);
        out << direction_name(d) << ',' << strategy_name(s) << ',' << c.n_trials
            << ',' << c.n_failed << ',' << format_g6(c.failure_rate()) << '\n';
      }
    }
  }
  {
    std::ofstream out(fs::path(out_dir) / "sign_tests.csv");
    out << "metric,direction,pair,n_pos,n_neg,p_value\n";
    for (const auto& e : r.sign_tests) {
      out << e.metric << ',' << direction_name(e.direction) << ','
          << strategy_name(e.a) << "-" << strategy_name(e.b) << ',' << e.n_pos
          << ',' << e.n_neg << ',' << format_g6(e.p_value) << '\n';
    }
  }
}

}  // namespace balance_assist
