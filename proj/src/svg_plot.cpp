#include "balance_assist/svg_plot.hpp"

#include "balance_assist/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace balance_assist {

std::optional<EpisodeSpan> plot_episode_span(const TrialLog& log) {
  const TrialResult r = compute_result(log);
  if (!r.t_out) return std::nullopt;
  double t1;
  if (r.t_fail) t1 = *r.t_fail;
  else if (r.t_in) t1 = *r.t_in;
  else t1 = log.t.back();
  return EpisodeSpan{*r.t_out, t1};
}

namespace {

constexpr double kWidth = 900.0;
constexpr double kPanelH = 150.0;
constexpr double kGap = 34.0;
constexpr double kLeft = 64.0;
constexpr double kRight = 20.0;
constexpr double kTop = 24.0;

struct Series {
  const std::vector<double>* y;
  const char* color;
  const char* label;
};

struct Panel {
  const char* title;
  std::vector<Series> series;
  double y0 = 0.0, y1 = 1.0;
};

double sx(double t, double t0, double t1) {
  return kLeft + (t - t0) / (t1 - t0) * (kWidth - kLeft - kRight);
}

double sy(double v, const Panel& p, double top) {
  const double f = (v - p.y0) / (p.y1 - p.y0);
  return top + kPanelH - f * kPanelH;
}

void autoscale(Panel& p) {
  double lo = 1e300, hi = -1e300;
  for (const Series& s : p.series) {
    for (double v : *s.y) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (lo > hi) { lo = 0.0; hi = 1.0; }
  const double pad = std::max(1e-6, 0.08 * (hi - lo));
  p.y0 = lo - pad;
  p.y1 = hi + pad;
}

void polyline(std::ofstream& out, const std::vector<double>& t,
              const std::vector<double>& y, const Panel& p, double top,
              double t0, double t1, const char* color) {
  out << "<polyline fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"1.2\" points=\"";
  for (std::size_t i = 0; i < t.size(); ++i)
    out << format_g6(sx(t[i], t0, t1)) << ',' << format_g6(sy(y[i], p, top)) << ' ';
  out << "\"/>\n";
}

}  // namespace

void render_trial_svg(const TrialLog& log, const std::string& path) {
  if (log.size() < 2) throw std::runtime_error("render_trial_svg: empty log");

  std::vector<double> f_zero(log.size(), 0.0);
  Panel panels[4] = {
      {"CoP x and DZ bounds [m]",
       {{&log.cop_x, "#c0392b", "cop_x"},
        {&log.dz_lo, "#7f8c8d", "dz_lo"},
        {&log.dz_hi, "#7f8c8d", "dz_hi"}}},
      {"interaction force [N]",
       {{&log.f_x, "#2980b9", "f_x"},
        {&log.f_y, "#27ae60", "f_y"},
        {&log.f_z, "#8e44ad", "f_z"}}},
      {"EE / reference, sagittal [m]",
       {{&log.ee_x, "#2980b9", "ee_x"},
        {&log.ee_z, "#16a085", "ee_z"},
        {&log.ref_x, "#e67e22", "ref_x"},
        {&log.ref_z, "#d35400", "ref_z"}}},
      {"elbow angle [rad]", {{&log.elbow, "#2c3e50", "elbow"}}},
  };
  for (Panel& p : panels) autoscale(p);

  const double t0 = log.t.front(), t1 = log.t.back();
  const double height = kTop + 4 * (kPanelH + kGap);
  const auto span = plot_episode_span(log);

  std::ofstream out(path);
  if (!out) throw std::runtime_error("render_trial_svg: cannot write " + path);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << kWidth << ' '
      << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (int pi = 0; pi < 4; ++pi) {
    const Panel& p = panels[pi];
    const double top = kTop + pi * (kPanelH + kGap);
    if (span) {
      out << "<rect x=\"" << format_g6(sx(span->t0, t0, t1)) << "\" y=\""
          << format_g6(top) << "\" width=\""
          << format_g6(sx(span->t1, t0, t1) - sx(span->t0, t0, t1))
          << "\" height=\"" << kPanelH
          << "\" fill=\"#2ecc71\" fill-opacity=\"0.18\"/>\n";
    }
    out << "<rect x=\"" << kLeft << "\" y=\"" << format_g6(top) << "\" width=\""
        << kWidth - kLeft - kRight << "\" height=\"" << kPanelH
        << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"0.8\"/>\n";
    out << "<text x=\"" << kLeft << "\" y=\"" << format_g6(top - 6.0)
        << "\" font-size=\"12\" font-family=\"sans-serif\">" << p.title
        << "</text>\n";
    // y tick labels at bounds
    out << "<text x=\"4\" y=\"" << format_g6(top + 10.0)
        << "\" font-size=\"10\" font-family=\"sans-serif\">" << format_g6(p.y1)
        << "</text>\n";
    out << "<text x=\"4\" y=\"" << format_g6(top + kPanelH)
        << "\" font-size=\"10\" font-family=\"sans-serif\">" << format_g6(p.y0)
        << "</text>\n";
    for (const Series& s : p.series)
      polyline(out, log.t, *s.y, p, top, t0, t1, s.color);
    // legend
    double lx = kLeft + 8.0;
    for (const Series& s : p.series) {
      out << "<text x=\"" << format_g6(lx) << "\" y=\""
          << format_g6(top + 12.0) << "\" font-size=\"10\" fill=\"" << s.color
          << "\" font-family=\"sans-serif\">" << s.label << "</text>\n";
      lx += 44.0;
    }
  }
  // time axis labels under the last panel
  const double axis_y = kTop + 4 * (kPanelH + kGap) - kGap + 14.0;
  for (int i = 0; i <= 6; ++i) {
    const double t = t0 + (t1 - t0) * i / 6.0;
    out << "<text x=\"" << format_g6(sx(t, t0, t1)) << "\" y=\""
        << format_g6(axis_y) << "\" font-size=\"10\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\">" << format_g6(t) << "</text>\n";
  }
  out << "<text x=\"" << kWidth / 2 << "\" y=\"" << format_g6(axis_y + 14.0)
      << "\" font-size=\"11\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\">t [s]</text>\n";
  out << "</svg>\n";
  if (!out) throw std::runtime_error("render_trial_svg: write failed: " + path);
}

}  // namespace balance_assist
