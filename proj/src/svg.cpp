#include "windcast/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace windcast {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 480.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 160.0;  // legend strip
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 55.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                          "#9467bd", "#ff7f0e", "#17becf"};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  for (const char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

Range pad(Range r) {
  if (r.lo == r.hi) {
    r.lo -= 0.5;
    r.hi += 0.5;
  } else {
    const double margin = 0.05 * (r.hi - r.lo);
    r.lo -= margin;
    r.hi += margin;
  }
  return r;
}

}  // namespace

std::string render_line_chart(const ChartSpec& spec) {
  bool has_points = false;
  Range xr{std::numeric_limits<double>::infinity(),
           -std::numeric_limits<double>::infinity()};
  Range yr = xr;
  for (const ChartSeries& s : spec.series) {
    if (s.x.size() != s.y.size()) {
      throw std::invalid_argument("render_line_chart: x/y length mismatch in " +
                                  s.label);
    }
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
        continue;
      }
      const double x = spec.log_x ? std::log10(s.x[i]) : s.x[i];
      has_points = true;
      xr.lo = std::min(xr.lo, x);
      xr.hi = std::max(xr.hi, x);
      yr.lo = std::min(yr.lo, s.y[i]);
      yr.hi = std::max(yr.hi, s.y[i]);
    }
  }

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) +
         "\" height=\"" + fmt(kHeight) + "\" viewBox=\"0 0 " + fmt(kWidth) +
         " " + fmt(kHeight) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fmt(kWidth / 2) +
         "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">" +
         escape(spec.title) + "</text>\n";

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;

  if (!has_points) {
    svg += "<text x=\"" + fmt(kMarginLeft + plot_w / 2) + "\" y=\"" +
           fmt(kMarginTop + plot_h / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"14\" fill=\"#777\">no data</text>\n";
    svg += "</svg>\n";
    return svg;
  }

  xr = pad(xr);
  yr = pad(yr);
  const auto to_px_x = [&](double x) {
    const double v = spec.log_x ? std::log10(x) : x;
    return kMarginLeft + (v - xr.lo) / (xr.hi - xr.lo) * plot_w;
  };
  const auto to_px_y = [&](double y) {
    return kMarginTop + plot_h - (y - yr.lo) / (yr.hi - yr.lo) * plot_h;
  };

  // Axes with min/max tick labels.
  svg += "<rect x=\"" + fmt(kMarginLeft) + "\" y=\"" + fmt(kMarginTop) +
         "\" width=\"" + fmt(plot_w) + "\" height=\"" + fmt(plot_h) +
         "\" fill=\"none\" stroke=\"#333\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double fx = xr.lo + (xr.hi - xr.lo) * t / 4.0;
    const double fy = yr.lo + (yr.hi - yr.lo) * t / 4.0;
    const double px = kMarginLeft + plot_w * t / 4.0;
    const double py = kMarginTop + plot_h - plot_h * t / 4.0;
    const double x_value = spec.log_x ? std::pow(10.0, fx) : fx;
    svg += "<line x1=\"" + fmt(px) + "\" y1=\"" + fmt(kMarginTop + plot_h) +
           "\" x2=\"" + fmt(px) + "\" y2=\"" +
           fmt(kMarginTop + plot_h + 5.0) + "\" stroke=\"#333\"/>\n";
    svg += "<text x=\"" + fmt(px) + "\" y=\"" +
           fmt(kMarginTop + plot_h + 20.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">" +
           fmt(x_value) + "</text>\n";
    svg += "<line x1=\"" + fmt(kMarginLeft - 5.0) + "\" y1=\"" + fmt(py) +
           "\" x2=\"" + fmt(kMarginLeft) + "\" y2=\"" + fmt(py) +
           "\" stroke=\"#333\"/>\n";
    svg += "<text x=\"" + fmt(kMarginLeft - 9.0) + "\" y=\"" + fmt(py + 4.0) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">" +
           fmt(fy) + "</text>\n";
  }
  svg += "<text x=\"" + fmt(kMarginLeft + plot_w / 2) + "\" y=\"" +
         fmt(kHeight - 12.0) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">" +
         escape(spec.x_label) + "</text>\n";
  svg += "<text x=\"18\" y=\"" + fmt(kMarginTop + plot_h / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" transform=\"rotate(-90 18 " +
         fmt(kMarginTop + plot_h / 2) + ")\">" +
         escape(spec.y_label) + "</text>\n";

  // Series polylines and legend.
  const double legend_x = kWidth - kMarginRight + 16.0;
  double legend_y = kMarginTop + 10.0;
  for (std::size_t s = 0; s < spec.series.size(); ++s) {
    const ChartSeries& series = spec.series[s];
    const char* color = kPalette[s % (sizeof(kPalette) / sizeof(*kPalette))];
    std::string points;
    std::size_t count = 0;
    for (std::size_t i = 0; i < series.x.size(); ++i) {
      if (!std::isfinite(series.x[i]) || !std::isfinite(series.y[i])) {
        continue;  // omitted point; the caller notes it in `note`
      }
      if (!points.empty()) {
        points += ' ';
      }
      points += fmt(to_px_x(series.x[i])) + "," + fmt(to_px_y(series.y[i]));
      ++count;
    }
    if (count == 1) {
      points += " " + points;  // degenerate polyline: render a dot-like pair
    }
    if (!points.empty()) {
      svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
             "\" stroke-width=\"1.8\" points=\"" + points + "\"/>\n";
    }
    svg += "<rect x=\"" + fmt(legend_x) + "\" y=\"" + fmt(legend_y - 9.0) +
           "\" width=\"14\" height=\"4\" fill=\"" + std::string(color) +
           "\"/>\n";
    svg += "<text x=\"" + fmt(legend_x + 20.0) + "\" y=\"" + fmt(legend_y) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" +
           escape(series.label) + "</text>\n";
    legend_y += 18.0;
  }
  if (!spec.note.empty()) {
    svg += "<text x=\"" + fmt(legend_x) + "\" y=\"" + fmt(legend_y + 6.0) +
           "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#777\">" +
           escape(spec.note) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace windcast
