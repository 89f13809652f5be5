#include "windcast/scaler.hpp"

#include <stdexcept>
#include <string>

namespace windcast {

namespace {

void require_width(const ScalerParams& params, const Tensor& matrix,
                   const char* what) {
  if (matrix.rank() != 2 || matrix.cols() != params.feature_count()) {
    throw std::invalid_argument(std::string(what) + ": got " +
                                matrix.shape_string() + ", expected " +
                                std::to_string(params.feature_count()) +
                                " columns");
  }
}

}  // namespace

ScalerParams fit_minmax(const Tensor& segment) {
  if (segment.rank() != 2 || segment.rows() == 0) {
    throw std::invalid_argument("fit_minmax: nonempty [rows, features] matrix required");
  }
  ScalerParams params;
  const std::size_t cols = segment.cols();
  params.min_.resize(cols);
  params.max_.resize(cols);
  params.degenerate_.resize(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    double lo = segment(0, j), hi = segment(0, j);
    for (std::size_t i = 1; i < segment.rows(); ++i) {
      lo = std::min(lo, segment(i, j));
      hi = std::max(hi, segment(i, j));
    }
    params.min_[j] = lo;
    params.max_[j] = hi;
    params.degenerate_[j] = (hi == lo);
  }
  return params;
}

Tensor ScalerParams::transform(const Tensor& matrix) const {
  require_width(*this, matrix, "ScalerParams::transform");
  Tensor out({matrix.rows(), matrix.cols()});
  for (std::size_t j = 0; j < matrix.cols(); ++j) {
    if (degenerate_[j]) {
      for (std::size_t i = 0; i < matrix.rows(); ++i) out(i, j) = 0.0;
    } else {
      const double scale = 1.0 / (max_[j] - min_[j]);
      for (std::size_t i = 0; i < matrix.rows(); ++i) {
        out(i, j) = (matrix(i, j) - min_[j]) * scale;
      }
    }
  }
  return out;
}

Tensor ScalerParams::inverse_transform(const Tensor& matrix) const {
  require_width(*this, matrix, "ScalerParams::inverse_transform");
  Tensor out({matrix.rows(), matrix.cols()});
  for (std::size_t j = 0; j < matrix.cols(); ++j) {
    if (degenerate_[j]) {
      for (std::size_t i = 0; i < matrix.rows(); ++i) out(i, j) = min_[j];
    } else {
      const double range = max_[j] - min_[j];
      for (std::size_t i = 0; i < matrix.rows(); ++i) {
        out(i, j) = matrix(i, j) * range + min_[j];
      }
    }
  }
  return out;
}

ScalerParams ScalerParams::head(std::size_t count) const {
  if (count == 0 || count > feature_count()) {
    throw std::invalid_argument("ScalerParams::head: bad feature count");
  }
  ScalerParams params;
  params.min_.assign(min_.begin(), min_.begin() + count);
  params.max_.assign(max_.begin(), max_.begin() + count);
  params.degenerate_.assign(degenerate_.begin(), degenerate_.begin() + count);
  return params;
}

ScalerParams ScalerParams::from_raw(std::vector<double> min,
                                    std::vector<double> max) {
  if (min.size() != max.size() || min.empty()) {
    throw std::invalid_argument("ScalerParams::from_raw: length mismatch");
  }
  ScalerParams params;
  params.degenerate_.resize(min.size());
  for (std::size_t j = 0; j < min.size(); ++j) {
    if (max[j] < min[j]) {
      throw std::invalid_argument("ScalerParams::from_raw: max < min");
    }
    params.degenerate_[j] = (max[j] == min[j]);
  }
  params.min_ = std::move(min);
  params.max_ = std::move(max);
  return params;
}

}  // namespace windcast
