#include "windcast/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace windcast {

namespace {

void check_pair(const Tensor& observed, const Tensor& predicted) {
  if (observed.rank() != 2 || predicted.rank() != 2) {
    throw std::invalid_argument("metrics: expected rank-2 inputs");
  }
  if (!observed.same_shape(predicted)) {
    throw std::invalid_argument("metrics: shape mismatch, observed " +
                                observed.shape_string() + " vs predicted " +
                                predicted.shape_string());
  }
  if (observed.rows() == 0) {
    throw std::invalid_argument("metrics: no rows to score");
  }
}

}  // namespace

RmseReport rmse(const Tensor& observed, const Tensor& predicted) {
  check_pair(observed, predicted);
  const std::size_t m = observed.rows();
  const std::size_t k = observed.cols();
  RmseReport report;
  report.per_column.assign(k, 0.0);
  double total = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    double ss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double e = observed(i, j) - predicted(i, j);
      ss += e * e;
    }
    report.per_column[j] = std::sqrt(ss / static_cast<double>(m));
    total += ss;
  }
  report.combined = std::sqrt(total / static_cast<double>(m * k));
  return report;
}

RSquaredReport r_squared(const Tensor& observed, const Tensor& predicted) {
  check_pair(observed, predicted);
  const std::size_t m = observed.rows();
  const std::size_t k = observed.cols();
  RSquaredReport report;
  report.per_column.assign(k, 0.0);
  report.degenerate_columns.assign(k, false);
  double sum = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      mean += observed(i, j);
    }
    mean /= static_cast<double>(m);
    double sse = 0.0;
    double sst = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double e = observed(i, j) - predicted(i, j);
      const double d = observed(i, j) - mean;
      sse += e * e;
      sst += d * d;
    }
    if (sst == 0.0) {
      report.degenerate_columns[j] = true;
      report.degenerate = true;
      report.per_column[j] = std::numeric_limits<double>::quiet_NaN();
    } else {
      report.per_column[j] = 1.0 - sse / sst;
      sum += report.per_column[j];
    }
  }
  report.combined = report.degenerate
                        ? std::numeric_limits<double>::quiet_NaN()
                        : sum / static_cast<double>(k);
  return report;
}

}  // namespace windcast
