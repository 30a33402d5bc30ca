#pragma once

#include "balance_assist/human_model.hpp"
#include "balance_assist/hqp_controller.hpp"
#include "balance_assist/robot_model.hpp"
#include "balance_assist/strategies.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace balance_assist {

/// Minimal sectioned key=value reader (TOML-style subset: [section],
/// key = value, '#' comments, numbers / booleans / "strings" /
/// [array, of, numbers]). Unknown keys are rejected by AppConfig.
class ConfigFile {
 public:
  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse_string(const std::string& text);

  bool has(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key,
                    double fallback) const;
  int get_int(const std::string& section, const std::string& key, int fallback) const;
  bool get_bool(const std::string& section, const std::string& key,
                bool fallback) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  std::vector<double> get_array(const std::string& section, const std::string& key,
                                const std::vector<double>& fallback) const;

  /// Keys never read through a getter; non-empty means a config typo.
  std::vector<std::string> unconsumed() const;

 private:
  std::map<std::string, std::map<std::string, std::string>> values_;
  mutable std::set<std::string> consumed_;
  const std::string* find(const std::string& section, const std::string& key) const;
};

struct SimParams {
  double dt = 1e-3;          // [s], in (0, 5 ms]
  double duration = 12.0;    // [s] hard cap per trial
  int log_stride = 10;       // log every N sim steps
  double settle_tail = 1.0;  // [s] kept after re-entry
  bool stiffness_ramp = false;
  double stiffness_ramp_time = 0.2;  // [s]
};

struct CalibrationParams {
  double max_safe_lean_fwd = 0.12;  // [rad]
  double max_safe_lean_bwd = 0.06;  // [rad]
};

struct CampaignParams {
  int subjects = 12;
  int trials_per_strategy = 6;  // alternating FWD/BWD
  std::uint64_t master_seed = 2024;
  double mass_mean = 65.5, mass_sd = 13.2;        // [kg]
  double height_mean = 1.707, height_sd = 0.094;  // [m]
  // per-subject multiplicative jitter (1 +- frac * N(0,1) truncated at 2 sigma)
  double subject_defect_jitter = 0.06;
  double subject_lean_jitter = 0.10;
  double subject_dz_jitter = 0.08;
  // per-trial jitter on the same constants
  double trial_defect_jitter = 0.03;
  double trial_lean_jitter = 0.05;
  bool parallel = true;
};

/// Every tunable of the pipeline in one place; defaults reproduce the
/// shipped configs/default.toml.
struct AppConfig {
  KinematicParams kinematics = default_kinematics();
  HqpConfig hqp;
  StrategyGains gains;
  HumanParams human;
  BehaviorConfig behavior;
  CalibrationParams calibration;
  SimParams sim;
  CampaignParams campaign;

  static AppConfig defaults();
  /// Throws std::runtime_error on parse errors or unknown keys.
  static AppConfig from_file(const std::string& path);
  static AppConfig from_config(const ConfigFile& f);
};

}  // namespace balance_assist
