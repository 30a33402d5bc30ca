#include "balance_assist/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace balance_assist {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string strip_comment(const std::string& line) {
  bool in_quote = false;
  for (size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_quote = !in_quote;
    if (line[i] == '#' && !in_quote) return line.substr(0, i);
  }
  return line;
}

double to_double(const std::string& section, const std::string& key,
                 const std::string& v) {
  size_t pos = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != v.size())
    throw std::runtime_error("config: bad number for " + section + "." + key +
                             ": '" + v + "'");
  return d;
}

}  // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str());
}

ConfigFile ConfigFile::parse_string(const std::string& text) {
  ConfigFile f;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error("config: malformed section at line " +
                                 std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: expected key = value at line " +
                               std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw std::runtime_error("config: empty key or value at line " +
                               std::to_string(lineno));
    f.values_[section][key] = val;
  }
  return f;
}

const std::string* ConfigFile::find(const std::string& section,
                                    const std::string& key) const {
  const auto s = values_.find(section);
  if (s == values_.end()) return nullptr;
  const auto k = s->second.find(key);
  if (k == s->second.end()) return nullptr;
  consumed_.insert(section + "." + key);
  return &k->second;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  const auto s = values_.find(section);
  return s != values_.end() && s->second.count(key) > 0;
}

double ConfigFile::get_double(const std::string& section, const std::string& key,
                              double fallback) const {
  const std::string* v = find(section, key);
  return v ? to_double(section, key, *v) : fallback;
}

int ConfigFile::get_int(const std::string& section, const std::string& key,
                        int fallback) const {
  const std::string* v = find(section, key);
  if (!v) return fallback;
  const double d = to_double(section, key, *v);
  return static_cast<int>(d);
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key,
                          bool fallback) const {
  const std::string* v = find(section, key);
  if (!v) return fallback;
  if (*v == "true") return true;
  if (*v == "false") return false;
  throw std::runtime_error("config: bad boolean for " + section + "." + key);
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key,
                                   const std::string& fallback) const {
  const std::string* v = find(section, key);
  if (!v) return fallback;
  std::string s = *v;
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
    s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<double> ConfigFile::get_array(const std::string& section,
                                          const std::string& key,
                                          const std::vector<double>& fallback) const {
  const std::string* v = find(section, key);
  if (!v) return fallback;
  const std::string& s = *v;
  if (s.size() < 2 || s.front() != '[' || s.back() != ']')
    throw std::runtime_error("config: expected [array] for " + section + "." + key);
  std::vector<double> out;
  std::string item;
  std::istringstream in(s.substr(1, s.size() - 2));
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(to_double(section, key, item));
  }
  return out;
}

std::vector<std::string> ConfigFile::unconsumed() const {
  std::vector<std::string> out;
  for (const auto& [sec, kv] : values_)
    for (const auto& [key, _] : kv)
      if (!consumed_.count(sec + "." + key)) out.push_back(sec + "." + key);
  return out;
}

namespace {

Vector6d as_vec6(const std::vector<double>& v, const std::string& what) {
  if (v.size() != 6)
    throw std::runtime_error("config: " + what + " needs 6 entries");
  Vector6d out;
  for (int i = 0; i < 6; ++i) out[i] = v[static_cast<size_t>(i)];
  return out;
}

Vector9d as_vec9(const std::vector<double>& v, const std::string& what) {
  if (v.size() != 9)
    throw std::runtime_error("config: " + what + " needs 9 entries");
  Vector9d out;
  for (int i = 0; i < 9; ++i) out[i] = v[static_cast<size_t>(i)];
  return out;
}

std::vector<double> to_std(const Vector6d& v) {
  return {v[0], v[1], v[2], v[3], v[4], v[5]};
}

}  // namespace

AppConfig AppConfig::defaults() {
  AppConfig c;
  c.hqp.preferred_arm << 0.5891, -2.666, 1.5704, 1.0956, -0.9817, 0.0;
  c.hqp.vel_limits << 1.5, 1.5, 1.5, 2.5, 2.5, 2.5, 3.0, 3.0, 3.0;
  return c;
}

AppConfig AppConfig::from_file(const std::string& path) {
  return from_config(ConfigFile::parse_file(path));
}

AppConfig AppConfig::from_config(const ConfigFile& f) {
  AppConfig c = defaults();

  // kinematics
  {
    KinematicParams& k = c.kinematics;
    std::vector<double> a, al, d, th0;
    for (int i = 0; i < 6; ++i) {
      a.push_back(k.dh[i].a);
      al.push_back(k.dh[i].alpha);
      d.push_back(k.dh[i].d);
      th0.push_back(k.dh[i].theta0);
    }
    a = f.get_array("kinematics", "dh_a", a);
    al = f.get_array("kinematics", "dh_alpha", al);
    d = f.get_array("kinematics", "dh_d", d);
    th0 = f.get_array("kinematics", "dh_theta0", th0);
    if (a.size() != 6 || al.size() != 6 || d.size() != 6 || th0.size() != 6)
      throw std::runtime_error("config: kinematics.dh_* need 6 entries");
    for (int i = 0; i < 6; ++i)
      k.dh[i] = {a[static_cast<size_t>(i)], al[static_cast<size_t>(i)],
                 d[static_cast<size_t>(i)], th0[static_cast<size_t>(i)]};
    const auto m = f.get_array("kinematics", "arm_mount",
                               {k.arm_mount.x(), k.arm_mount.y(), k.arm_mount.z()});
    if (m.size() != 3) throw std::runtime_error("config: arm_mount needs 3 entries");
    k.arm_mount = Eigen::Vector3d(m[0], m[1], m[2]);
    k.handle_offset = f.get_double("kinematics", "handle_offset", k.handle_offset);
    k.arm_q_min = as_vec6(f.get_array("kinematics", "arm_q_min", to_std(k.arm_q_min)),
                          "arm_q_min");
    k.arm_q_max = as_vec6(f.get_array("kinematics", "arm_q_max", to_std(k.arm_q_max)),
                          "arm_q_max");
  }

  // hqp
  {
    HqpConfig& h = c.hqp;
    h.clik_gain = as_vec6(f.get_array("hqp", "clik_gain", to_std(h.clik_gain)),
                          "clik_gain");
    h.preferred_arm = as_vec6(
        f.get_array("hqp", "preferred_arm", to_std(h.preferred_arm)), "preferred_arm");
    h.secondary_gain = f.get_double("hqp", "secondary_gain", h.secondary_gain);
    std::vector<double> vl(h.vel_limits.data(), h.vel_limits.data() + 9);
    h.vel_limits = as_vec9(f.get_array("hqp", "vel_limits", vl), "vel_limits");
    h.tolerance = f.get_double("hqp", "tolerance", h.tolerance);
    h.damping = f.get_double("hqp", "damping", h.damping);
    h.damping_singular = f.get_double("hqp", "damping_singular", h.damping_singular);
    h.sigma_min_threshold =
        f.get_double("hqp", "sigma_min_threshold", h.sigma_min_threshold);
  }

  // admittance / strategy gains
  {
    StrategyGains& g = c.gains;
    const double ml = f.get_double("admittance", "mass_lin", g.m_p[0]);
    const double mr = f.get_double("admittance", "mass_rot", g.m_p[3]);
    const double dl = f.get_double("admittance", "damping_lin", g.d_stable[0]);
    const double dr = f.get_double("admittance", "damping_rot", g.d_stable[3]);
    g.m_p << ml, ml, ml, mr, mr, mr;
    g.d_stable << dl, dl, dl, dr, dr, dr;
    g.k_p1 = f.get_double("admittance", "k_p1", g.k_p1);
    g.hwa_wall_clearance =
        f.get_double("strategy", "hwa_wall_clearance", g.hwa_wall_clearance);
  }

  // human
  {
    HumanParams& h = c.human;
    h.mass = f.get_double("human", "mass", h.mass);
    h.height = f.get_double("human", "height", h.height);
    h.com_ratio = f.get_double("human", "com_ratio", h.com_ratio);
    h.shoulder_ratio = f.get_double("human", "shoulder_ratio", h.shoulder_ratio);
    h.upper_arm = f.get_double("human", "upper_arm", h.upper_arm);
    h.forearm = f.get_double("human", "forearm", h.forearm);
    h.grip_stiffness = f.get_double("human", "grip_stiffness", h.grip_stiffness);
    h.grip_damping = f.get_double("human", "grip_damping", h.grip_damping);
    h.voluntary_limit_frac =
        f.get_double("human", "voluntary_limit_frac", h.voluntary_limit_frac);
    h.hand_gain_ratio = f.get_double("human", "hand_gain_ratio", h.hand_gain_ratio);
    h.hand_angle_fwd = f.get_double("human", "hand_angle_fwd", h.hand_angle_fwd);
    h.hand_angle_bwd = f.get_double("human", "hand_angle_bwd", h.hand_angle_bwd);
    h.toe_ratio = f.get_double("human", "toe_ratio", h.toe_ratio);
    h.heel_ratio = f.get_double("human", "heel_ratio", h.heel_ratio);
    h.half_stance_ratio =
        f.get_double("human", "half_stance_ratio", h.half_stance_ratio);
    h.dz_lateral_fraction =
        f.get_double("human", "dz_lateral_fraction", h.dz_lateral_fraction);
  }

  // behavior
  {
    BehaviorConfig& b = c.behavior;
    b.lean_start_time = f.get_double("behavior", "lean_start_time", b.lean_start_time);
    b.lean_rate = f.get_double("behavior", "lean_rate", b.lean_rate);
    b.lean_cap = f.get_double("behavior", "lean_cap", b.lean_cap);
    b.balance_kp_frac = f.get_double("behavior", "balance_kp_frac", b.balance_kp_frac);
    b.balance_kd_frac = f.get_double("behavior", "balance_kd_frac", b.balance_kd_frac);
    b.hold_stiffness_frac =
        f.get_double("behavior", "hold_stiffness_frac", b.hold_stiffness_frac);
    b.hold_damping = f.get_double("behavior", "hold_damping", b.hold_damping);
    b.defect_torque = f.get_double("behavior", "defect_torque", b.defect_torque);
    b.t_wait = f.get_double("behavior", "t_wait", b.t_wait);
    b.min_hold_time = f.get_double("behavior", "min_hold_time", b.min_hold_time);
    b.regain_margin = f.get_double("behavior", "regain_margin", b.regain_margin);
    b.step_distance = f.get_double("behavior", "step_distance", b.step_distance);
    b.assist_min_force =
        f.get_double("behavior", "assist_min_force", b.assist_min_force);
    b.voluntary_rate = f.get_double("behavior", "voluntary_rate", b.voluntary_rate);
  }

  // calibration
  c.calibration.max_safe_lean_fwd = f.get_double(
      "calibration", "max_safe_lean_fwd", c.calibration.max_safe_lean_fwd);
  c.calibration.max_safe_lean_bwd = f.get_double(
      "calibration", "max_safe_lean_bwd", c.calibration.max_safe_lean_bwd);

  // sim
  {
    SimParams& s = c.sim;
    s.dt = f.get_double("sim", "dt", s.dt);
    s.duration = f.get_double("sim", "duration", s.duration);
    s.log_stride = f.get_int("sim", "log_stride", s.log_stride);
    s.settle_tail = f.get_double("sim", "settle_tail", s.settle_tail);
    s.stiffness_ramp = f.get_bool("sim", "stiffness_ramp", s.stiffness_ramp);
    s.stiffness_ramp_time =
        f.get_double("sim", "stiffness_ramp_time", s.stiffness_ramp_time);
    if (!(s.dt > 0.0 && s.dt <= 5e-3))
      throw std::runtime_error("config: sim.dt must be in (0, 5 ms]");
    if (s.duration <= 0.0) throw std::runtime_error("config: sim.duration <= 0");
  }

  // campaign
  {
    CampaignParams& p = c.campaign;
    p.subjects = f.get_int("campaign", "subjects", p.subjects);
    p.trials_per_strategy =
        f.get_int("campaign", "trials_per_strategy", p.trials_per_strategy);
    p.master_seed = static_cast<std::uint64_t>(
        f.get_double("campaign", "master_seed", static_cast<double>(p.master_seed)));
    p.mass_mean = f.get_double("campaign", "mass_mean", p.mass_mean);
    p.mass_sd = f.get_double("campaign", "mass_sd", p.mass_sd);
    p.height_mean = f.get_double("campaign", "height_mean", p.height_mean);
    p.height_sd = f.get_double("campaign", "height_sd", p.height_sd);
    p.subject_defect_jitter =
        f.get_double("campaign", "subject_defect_jitter", p.subject_defect_jitter);
    p.subject_lean_jitter =
        f.get_double("campaign", "subject_lean_jitter", p.subject_lean_jitter);
    p.subject_dz_jitter =
        f.get_double("campaign", "subject_dz_jitter", p.subject_dz_jitter);
    p.trial_defect_jitter =
        f.get_double("campaign", "trial_defect_jitter", p.trial_defect_jitter);
    p.trial_lean_jitter =
        f.get_double("campaign", "trial_lean_jitter", p.trial_lean_jitter);
    p.parallel = f.get_bool("campaign", "parallel", p.parallel);
  }

  const auto leftover = f.unconsumed();
  if (!leftover.empty()) {
    std::string msg = "config: unknown keys:";
    for (const auto& k : leftover) msg += " " + k;
    throw std::runtime_error(msg);
  }

  // invariants on the loaded quantities
  if (c.gains.m_p.minCoeff() <= 0.0 || c.gains.d_stable.minCoeff() <= 0.0)
    throw std::runtime_error("config: admittance mass/damping must be positive");
  if (c.gains.k_p1 < 0.0) throw std::runtime_error("config: k_p1 must be >= 0");
  if (c.hqp.clik_gain.minCoeff() <= 0.0 || c.hqp.secondary_gain <= 0.0)
    throw std::runtime_error("config: hqp gains must be positive");
  if (!(c.hqp.tolerance > 0.0 && c.hqp.tolerance <= 1e-3))
    throw std::runtime_error("config: hqp.tolerance must be in (0, 1e-3]");
  if (c.human.mass <= 0.0 || c.human.height <= 0.0)
    throw std::runtime_error("config: human mass/height must be positive");
  if (!(c.human.com_ratio > 0.0 && c.human.com_ratio < 1.0))
    throw std::runtime_error("config: human.com_ratio must be in (0, 1)");
  if (c.human.upper_arm_len() <= 0.0 || c.human.forearm_len() <= 0.0)
    throw std::runtime_error("config: arm segment lengths must be positive");
  for (int i = 0; i < 6; ++i)
    if (c.kinematics.arm_q_min[i] >= c.kinematics.arm_q_max[i])
      throw std::runtime_error("config: arm joint limits must satisfy min < max");
  return c;
}

}  // namespace balance_assist
