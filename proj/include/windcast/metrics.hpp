#ifndef WINDCAST_METRICS_HPP
#define WINDCAST_METRICS_HPP

#include <cstddef>
#include <vector>

#include "windcast/tensor.hpp"

namespace windcast {

struct RmseReport {
  double combined = 0.0;  // pooled over every entry of every column
  std::vector<double> per_column;
};

/// Root mean squared error between [m, k] matrices, m >= 1. Metrics are
/// expected to be computed after inverse scaling, in original units.
RmseReport rmse(const Tensor& observed, const Tensor& predicted);

/**
 * Coefficient of determination, 1 - SSE/SST, with SST about the observed
 * column mean. A column with zero SST has no defined R²; it is flagged
 * degenerate (its per-column entry is NaN) and poisons the combined value,
 * which otherwise averages the per-column R² uniformly.
 */
struct RSquaredReport {
  double combined = 0.0;
  std::vector<double> per_column;
  std::vector<bool> degenerate_columns;
  bool degenerate = false;  // any column with zero total sum of squares
};

RSquaredReport r_squared(const Tensor& observed, const Tensor& predicted);

}  // namespace windcast

#endif  // WINDCAST_METRICS_HPP
