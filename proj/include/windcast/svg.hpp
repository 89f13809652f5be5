#ifndef WINDCAST_SVG_HPP
#define WINDCAST_SVG_HPP

#include <string>
#include <vector>

namespace windcast {

struct ChartSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;  // same length as x
};

/**
 * Minimal deterministic line chart. Identical specs render to identical
 * bytes: fixed canvas, fixed palette, snprintf-formatted coordinates.
 * With log_x the x axis is log-scaled (all x must be positive). Series
 * whose point count is below the common x grid are simply shorter
 * polylines; a note string renders under the legend (used to flag
 * omitted points). An empty spec renders a valid "no data" placeholder.
 */
struct ChartSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  std::vector<ChartSeries> series;
  std::string note;
};

std::string render_line_chart(const ChartSpec& spec);

}  // namespace windcast

#endif  // WINDCAST_SVG_HPP
