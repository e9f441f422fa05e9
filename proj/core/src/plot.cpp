#include "kerrsteer/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace kerrsteer {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 520.0;
constexpr double kLeft = 90.0;
constexpr double kRight = 150.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 70.0;

constexpr std::array<const char*, 6> kLineColours = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
constexpr std::array<const char*, 4> kClassColours = {"#d9d9d9", "#4daf4a", "#377eb8", "#e41a1c"};

std::string header(const std::string& title) {
  return fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<text x=\"{2}\" y=\"28\" text-anchor=\"middle\" font-size=\"15\">{3}</text>\n",
      kWidth, kHeight, kWidth / 2, title);
}

std::string label(double x) { return fmt::format("{:.3g}", x); }

struct Range {
  double lo;
  double hi;
  [[nodiscard]] double map(double v, double a, double b) const { return hi == lo ? 0.5 * (a + b) : a + (v - lo) / (hi - lo) * (b - a); }
};

Range pad(double lo, double hi) {
  if (!(hi > lo)) return {lo - 0.5, hi + 0.5};
  const double m = 0.05 * (hi - lo);
  return {lo - m, hi + m};
}

std::string axes(const std::string& x_label, const std::string& y_label, Range xr, Range yr) {
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  std::string out = fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
                                x0, y1, x1 - x0, y0 - y1);
  for (int k = 0; k <= 4; ++k) {
    const double fx = xr.lo + (xr.hi - xr.lo) * k / 4.0;
    const double fy = yr.lo + (yr.hi - yr.lo) * k / 4.0;
    const double px = xr.map(fx, x0, x1);
    const double py = yr.map(fy, y0, y1);
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", px, y0 + 18, label(fx));
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", x0 - 6, py + 4, label(fy));
  }
  out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", 0.5 * (x0 + x1), kHeight - 25,
                     x_label);
  out += fmt::format("<text x=\"20\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 20 {0})\">{1}</text>\n",
                     0.5 * (y0 + y1), y_label);
  return out;
}

std::string viridis_like(double u) {
  // Piecewise-linear blend through five anchor colours.
  static constexpr std::array<std::array<double, 3>, 5> kAnchors = {
      {{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
  u = std::clamp(u, 0.0, 1.0) * 4.0;
  const int k = std::min(3, static_cast<int>(u));
  const double t = u - k;
  std::array<int, 3> c{};
  for (int i = 0; i < 3; ++i) c[i] = static_cast<int>(std::lround(kAnchors[k][i] + t * (kAnchors[k + 1][i] - kAnchors[k][i])));
  return fmt::format("rgb({},{},{})", c[0], c[1], c[2]);
}

}  // namespace

std::string line_plot_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                          const std::vector<LineSeries>& series, bool unit_reference) {
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
  for (const auto& s : series) {
    for (double v : s.x) xlo = std::min(xlo, v), xhi = std::max(xhi, v);
    for (double v : s.y) {
      if (std::isfinite(v)) ylo = std::min(ylo, v), yhi = std::max(yhi, v);
    }
  }
  if (unit_reference) ylo = std::min(ylo, 1.0), yhi = std::max(yhi, 1.0);
  if (!std::isfinite(xlo)) xlo = 0, xhi = 1, ylo = 0, yhi = 1;
  const Range xr{xlo, xhi};
  const Range yr = pad(ylo, yhi);
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;

  std::string out = header(title) + axes(x_label, y_label, xr, yr);
  if (unit_reference) {
    const double py = yr.map(1.0, y0, y1);
    out += fmt::format("<line x1=\"{}\" y1=\"{:.2f}\" x2=\"{}\" y2=\"{:.2f}\" stroke=\"grey\" stroke-dasharray=\"6 4\"/>\n",
                       x0, py, x1, py);
  }
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* colour = kLineColours[k % kLineColours.size()];
    std::string points;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      points += fmt::format("{:.2f},{:.2f} ", xr.map(s.x[i], x0, x1), yr.map(s.y[i], y0, y1));
    }
    out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n", colour, points);
    const double ly = kTop + 20.0 * static_cast<double>(k);
    out += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"2\"/>\n", x1 + 12, ly,
                       x1 + 32, ly, colour);
    out += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", x1 + 38, ly + 4, s.label);
  }
  return out + "</svg>\n";
}

std::string heatmap_svg(const SweepGrid& g, const std::string& title) {
  const bool categorical = g.spec.observable == Observable::Classification;
  const bool log1 = g.spec.axis1.scale == AxisScale::Log;
  const bool log2 = g.spec.axis2.scale == AxisScale::Log;
  auto coord = [](double v, bool log) { return log ? std::log10(v) : v; };
  const std::size_t n1 = g.axis1.size(), n2 = g.axis2.size();

  double vlo = std::numeric_limits<double>::infinity(), vhi = -vlo;
  for (const auto& c : g.cells) {
    if (c.status == CellStatus::Ok && std::isfinite(c.value)) vlo = std::min(vlo, c.value), vhi = std::max(vhi, c.value);
  }

  // axis1 runs horizontally, axis2 vertically; cells are centred on the grid values.
  const Range xr{coord(g.axis1.front(), log1), coord(g.axis1.back(), log1)};
  const Range yr{coord(g.axis2.front(), log2), coord(g.axis2.back(), log2)};
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  const double cw = (x1 - x0) / static_cast<double>(n1);
  const double ch = (y0 - y1) / static_cast<double>(n2);

  std::string out = header(title);
  out += "<defs><pattern id=\"mask\" width=\"6\" height=\"6\" patternUnits=\"userSpaceOnUse\">"
         "<rect width=\"6\" height=\"6\" fill=\"#bbbbbb\"/><path d=\"M0,6 L6,0\" stroke=\"#666666\"/></pattern></defs>\n";
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      const SweepCell& c = g.at(i, j);
      std::string fill = "url(#mask)";
      if (c.status == CellStatus::Ok) {
        if (categorical) fill = kClassColours[static_cast<std::size_t>(std::clamp(static_cast<int>(c.value), 0, 3))];
        else fill = viridis_like(vhi > vlo ? (c.value - vlo) / (vhi - vlo) : 0.5);
      }
      out += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"{}\"/>\n",
                         x0 + cw * static_cast<double>(i), y0 - ch * static_cast<double>(j + 1), cw + 0.3, ch + 0.3,
                         fill);
    }
  }
  const std::string xl = log1 ? fmt::format("log10 {}", g.spec.axis1.name) : g.spec.axis1.name;
  const std::string yl = log2 ? fmt::format("log10 {}", g.spec.axis2.name) : g.spec.axis2.name;
  out += axes(xl, yl, xr, yr);

  const double lx = x1 + 15;
  if (categorical) {
    static constexpr std::array<Classification, 4> kClasses = {Classification::NoSteering, Classification::Symmetric,
                                                               Classification::Asymmetric2Steers1,
                                                               Classification::Asymmetric1Steers2};
    for (std::size_t k = 0; k < kClasses.size(); ++k) {
      const double ly = kTop + 22.0 * static_cast<double>(k);
      out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"14\" height=\"14\" fill=\"{}\"/>\n", lx, ly, kClassColours[k]);
      out += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"10\">{}</text>\n", lx + 18, ly + 11, to_string(kClasses[k]));
    }
    const double ly = kTop + 22.0 * 4;
    out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"14\" height=\"14\" fill=\"url(#mask)\"/>\n", lx, ly);
    out += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"10\">unstable / failed</text>\n", lx + 18, ly + 11);
  } else if (std::isfinite(vlo)) {
    constexpr int kSteps = 50;
    const double bar_h = y0 - y1;
    for (int k = 0; k < kSteps; ++k) {
      out += fmt::format("<rect x=\"{}\" y=\"{:.2f}\" width=\"18\" height=\"{:.2f}\" fill=\"{}\"/>\n", lx,
                         y0 - bar_h * (k + 1) / kSteps, bar_h / kSteps + 0.3, viridis_like((k + 0.5) / kSteps));
    }
    out += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", lx + 24, y0, label(vlo));
    out += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", lx + 24, y1 + 10, label(vhi));
    out += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", lx, y1 - 8, to_string(g.spec.observable));
  }
  return out + "</svg>\n";
}

std::string spectrum_svg(const std::vector<SpectrumRow>& rows) {
  std::vector<LineSeries> s(3);
  s[0].label = "EPR 12";
  s[1].label = "EPR 21";
  s[2].label = "Duan-Simon / 4";
  for (const auto& r : rows) {
    for (auto& l : s) l.x.push_back(r.omega);
    s[0].y.push_back(r.epr_12);
    s[1].y.push_back(r.epr_21);
    s[2].y.push_back(r.duan_simon_scaled);
  }
  return line_plot_svg("Output spectral criteria at optimal angles", "omega / gamma1", "value", s);
}

}  // namespace kerrsteer
