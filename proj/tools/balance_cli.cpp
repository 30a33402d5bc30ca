#include "balance_assist/config.hpp"
#include "balance_assist/experiment.hpp"
#include "balance_assist/io.hpp"
#include "balance_assist/svg_plot.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

namespace ba = balance_assist;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitBadConfig = 2;

std::string resolve_config_path(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("BALANCE_ASSIST_CONFIG")) return env;
  return "configs/default.toml";
}

void write_region_file(const ba::SupportRegion& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "[sp]\n";
  out << "lo = [" << ba::format_g6(r.sp.lo.x()) << ", " << ba::format_g6(r.sp.lo.y())
      << "]\n";
  out << "hi = [" << ba::format_g6(r.sp.hi.x()) << ", " << ba::format_g6(r.sp.hi.y())
      << "]\n";
  out << "[dz]\n";
  out << "lo = [" << ba::format_g6(r.dz.lo.x()) << ", " << ba::format_g6(r.dz.lo.y())
      << "]\n";
  out << "hi = [" << ba::format_g6(r.dz.hi.x()) << ", " << ba::format_g6(r.dz.hi.y())
      << "]\n";
}

ba::SupportRegion read_region_file(const std::string& path) {
  const ba::ConfigFile f = ba::ConfigFile::parse_file(path);
  auto vec2 = [&](const std::string& sec, const std::string& key) {
    const auto v = f.get_array(sec, key, {});
    if (v.size() != 2)
      throw std::runtime_error("region file: " + sec + "." + key + " needs 2 entries");
    return Eigen::Vector2d(v[0], v[1]);
  };
  ba::SupportRegion r;
  r.sp.lo = vec2("sp", "lo");
  r.sp.hi = vec2("sp", "hi");
  r.dz.lo = vec2("dz", "lo");
  r.dz.hi = vec2("dz", "hi");
  return r;
}

void print_result(const ba::TrialResult& r) {
  auto opt = [](const std::optional<double>& v, double scale, const char* unit) {
    return v ? ba::format_g6(*v * scale) + unit : std::string("-");
  };
  std::cout << "failed:        " << (r.failed ? "yes" : "no") << "\n";
  std::cout << "t_out:         " << opt(r.t_out, 1.0, " s") << "\n";
  std::cout << "t_in:          " << opt(r.t_in, 1.0, " s") << "\n";
  std::cout << "t_fail:        " << opt(r.t_fail, 1.0, " s") << "\n";
  std::cout << "dt_out_dz:     " << opt(r.time_outside, 1.0, " s") << "\n";
  std::cout << "d_max_dz:      " << opt(r.max_distance, 100.0, " cm") << "\n";
  std::cout << "f_max_x:       " << ba::format_g6(r.f_max_x) << " %\n";
  std::cout << "f_max_z:       " << ba::format_g6(r.f_max_z) << " %\n";
  std::cout << "max_voluntary: " << ba::format_g6(r.max_voluntary) << " N\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"balance-recovery assistance simulator"};
  app.require_subcommand(1);

  std::string config_flag;
  std::string out_dir = "out";
  app.add_option("-c,--config", config_flag,
                 "config file (default: $BALANCE_ASSIST_CONFIG or configs/default.toml)");
  app.add_option("-o,--out", out_dir, "output directory");

  auto* cal = app.add_subcommand("calibrate", "compute the DZ/SP region file");
  double cal_mass = 0.0, cal_height = 0.0, cal_fwd = 0.0, cal_bwd = 0.0;
  cal->add_option("--mass", cal_mass, "subject mass [kg] override");
  cal->add_option("--height", cal_height, "subject height [m] override");
  cal->add_option("--max-lean-fwd", cal_fwd, "widest safe forward lean [rad]");
  cal->add_option("--max-lean-bwd", cal_bwd, "widest safe backward lean [rad]");

  auto* run = app.add_subcommand("run", "run a single trial");
  std::string run_strategy = "mba", run_direction = "fwd", run_region;
  std::uint64_t run_seed = 1;
  run->add_option("--strategy", run_strategy, "fsa|mba|hwa");
  run->add_option("--direction", run_direction, "fwd|bwd");
  run->add_option("--seed", run_seed, "trial seed");
  run->add_option("--region", run_region, "region file from 'calibrate'");

  auto* camp = app.add_subcommand("campaign", "run the full population campaign");

  auto* plot = app.add_subcommand("plot", "render a trial log as SVG");
  std::string plot_log, plot_svg;
  plot->add_option("--log", plot_log, "trial CSV")->required();
  plot->add_option("--svg", plot_svg, "output SVG (default: <log>.svg)");

  CLI11_PARSE(app, argc, argv);

  ba::AppConfig cfg;
  try {
    cfg = ba::AppConfig::from_file(resolve_config_path(config_flag));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadConfig;
  }

  try {
    fs::create_directories(out_dir);

    if (cal->parsed()) {
      ba::HumanParams human = cfg.human;
      if (cal_mass > 0.0) human.mass = cal_mass;
      if (cal_height > 0.0) human.height = cal_height;
      const double fwd = cal_fwd > 0.0 ? cal_fwd : cfg.calibration.max_safe_lean_fwd;
      const double bwd = cal_bwd > 0.0 ? cal_bwd : cfg.calibration.max_safe_lean_bwd;
      ba::SupportRegion region;
      try {
        region = ba::calibrate_dz(human, fwd, bwd);
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadConfig;
      }
      const std::string path = (fs::path(out_dir) / "region.toml").string();
      write_region_file(region, path);
      std::cout << "wrote " << path << "\n";
      return kExitOk;
    }

    if (run->parsed()) {
      ba::TrialConfig trial = ba::make_trial_config(
          cfg, ba::strategy_from_name(run_strategy),
          ba::direction_from_name(run_direction), run_seed);
      if (!run_region.empty()) {
        // region files carry the calibrated widths; map them back onto the
        // subject's lean limits
        const ba::SupportRegion region = read_region_file(run_region);
        const double L = trial.human.com_height();
        trial.calibration.max_safe_lean_fwd =
            std::asin(std::min(0.999, (region.dz.hi.x() - trial.human.ankle.x()) / L));
        trial.calibration.max_safe_lean_bwd =
            std::asin(std::min(0.999, (trial.human.ankle.x() - region.dz.lo.x()) / L));
      }
      const auto [result, log] = ba::run_trial(trial);
      char name[64];
      std::snprintf(name, sizeof(name), "trial_%s_%s_seed%llu.csv",
                    ba::strategy_name(trial.strategy),
                    ba::direction_name(trial.direction),
                    static_cast<unsigned long long>(run_seed));
      const std::string path = (fs::path(out_dir) / name).string();
      ba::write_trial_csv(log, path);
      print_result(result);
      std::cout << "log: " << path << "\n";
      return kExitOk;  // a failed trial is data, not an error
    }

    if (camp->parsed()) {
      const ba::CampaignResult result = ba::run_campaign(cfg, out_dir, true);
      int failed = 0;
      for (const auto& t : result.trials) failed += t.result.failed ? 1 : 0;
      std::cout << "trials: " << result.trials.size() << " (failed: " << failed
                << ")\n";
      std::cout << "wrote " << (fs::path(out_dir) / "table_results.csv").string()
                << ", failures.csv, sign_tests.csv\n";
      return kExitOk;
    }

    if (plot->parsed()) {
      const ba::TrialLog log = ba::read_trial_csv(plot_log);
      const std::string svg = plot_svg.empty() ? plot_log + ".svg" : plot_svg;
      ba::render_trial_svg(log, svg);
      std::cout << "wrote " << svg << "\n";
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
