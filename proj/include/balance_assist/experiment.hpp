#pragma once

#include "balance_assist/config.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace balance_assist {

enum class Direction { FWD, BWD };

const char* direction_name(Direction d);
Direction direction_from_name(const std::string& s);
inline double direction_sign(Direction d) { return d == Direction::FWD ? 1.0 : -1.0; }

/// Everything one trial needs; derived from AppConfig plus per-trial seed.
struct TrialConfig {
  StrategyKind strategy = StrategyKind::MBA;
  Direction direction = Direction::FWD;
  HumanParams human;
  BehaviorConfig behavior;
  CalibrationParams calibration;
  KinematicParams kinematics;
  HqpConfig hqp;
  StrategyGains gains;
  SimParams sim;
  std::uint64_t seed = 0;
};

TrialConfig make_trial_config(const AppConfig& cfg, StrategyKind strategy,
                              Direction direction, std::uint64_t seed);

/// Uniformly sampled series at sim.dt * log_stride; values are snapped to the
/// 6-significant-digit print grid so persisted CSVs round-trip exactly.
struct TrialLog {
  SupportRegion region;
  double subject_weight = 0.0;  // w_h [N]
  std::vector<double> t, cop_x, cop_y, dz_lo, dz_hi;
  std::vector<double> f_x, f_y, f_z;
  std::vector<double> ee_x, ee_z, ref_x, ref_z;
  std::vector<double> elbow, voluntary;
  std::vector<Phase> phase;
  std::size_t size() const { return t.size(); }
};

struct TrialResult {
  bool failed = false;
  std::optional<double> t_out, t_in, t_fail;
  std::optional<double> time_outside;  // dt_out [s]
  std::optional<double> max_distance;  // D_max [m]
  double f_max_x = 0.0, f_max_z = 0.0;  // [% of body weight]
  double max_voluntary = 0.0;          // [N]
  int exit_episodes = 0;
};

/// Fixed-step closed loop: human pendulum -> reference generator ->
/// admittance -> CLIK/HQP -> joint integration, deterministic for a given
/// seed. Throws std::runtime_error when the state goes non-finite.
std::pair<TrialResult, TrialLog> run_trial(const TrialConfig& cfg);

/// dt_out = t_in - t_out of the first exit episode; absent when the trial
/// failed or the CoP never left / never returned.
std::optional<double> metric_time_outside(const TrialLog& log);
/// max DZ distance over the first episode; absent on failure or no episode.
std::optional<double> metric_max_distance(const TrialLog& log);
/// max |f_axis| over [t_out, t_in] (or [t_out, t_fail] when failed), as % of
/// w_h. Trials run in the sagittal plane, so the Y axis carries no index;
/// axis is 0 (X) or 2 (Z).
double metric_max_force(const TrialLog& log, double subject_weight, int axis);

/// Assemble a TrialResult purely from the log (used by run_trial itself, so
/// recomputation from a persisted log reproduces the result exactly).
TrialResult compute_result(const TrialLog& log);

/// Two-sided exact binomial sign test; zero differences are dropped. Returns
/// 1.0 when no informative pairs remain.
double sign_test(const std::vector<double>& paired_diffs);

void write_trial_csv(const TrialLog& log, const std::string& path);
TrialLog read_trial_csv(const std::string& path);

struct CellStats {
  int n_trials = 0;
  int n_failed = 0;
  std::optional<double> dt_mean, dt_std;      // [s]
  std::optional<double> dmax_mean, dmax_std;  // [m]
  double fx_mean = 0.0, fx_std = 0.0;         // [%]
  double fz_mean = 0.0, fz_std = 0.0;         // [%]
  double failure_rate() const {
    return n_trials > 0 ? static_cast<double>(n_failed) / n_trials : 0.0;
  }
};

struct SignTestEntry {
  std::string metric;  // dt_out | d_max | f_max_x | f_max_z
  Direction direction;
  StrategyKind a, b;
  int n_pos = 0, n_neg = 0;  // sign counts of per-subject mean(a) - mean(b)
  double p_value = 1.0;
};

struct CampaignTrialRecord {
  int subject = 0;
  StrategyKind strategy = StrategyKind::MBA;
  Direction direction = Direction::FWD;
  int trial_index = 0;  // within (subject, strategy)
  TrialResult result;
};

struct CampaignResult {
  std::vector<CampaignTrialRecord> trials;
  // cells indexed [strategy][direction]
  std::array<std::array<CellStats, 2>, 3> cells{};
  std::vector<SignTestEntry> sign_tests;
  const CellStats& cell(StrategyKind s, Direction d) const {
    return cells[static_cast<int>(s)][static_cast<int>(d)];
  }
};

/// Per-subject mean of one metric over non-failed trials of a cell; used for
/// the paired sign tests. Absent when the subject has no defined value.
std::vector<std::optional<double>> subject_means(
    const CampaignResult& r, const std::string& metric, StrategyKind s,
    Direction d, int n_subjects);

/// Population run per the protocol: subjects x strategies x alternating
/// FWD/BWD trials. Per-trial logs land in out_dir when write_logs is set;
/// aggregate CSVs (table layout, failure rates, sign tests) are always
/// written. Deterministic under the master seed.
CampaignResult run_campaign(const AppConfig& cfg, const std::string& out_dir,
                            bool write_logs = true);

void write_campaign_csvs(const CampaignResult& r, const std::string& out_dir);

HumanParams sample_subject(const AppConfig& cfg, int subject_idx,
                           BehaviorConfig& behavior_out,
                           CalibrationParams& calibration_out);

}  // namespace balance_assist
