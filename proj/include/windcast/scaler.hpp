#ifndef WINDCAST_SCALER_HPP
#define WINDCAST_SCALER_HPP

#include <cstddef>
#include <vector>

#include "windcast/tensor.hpp"

namespace windcast {

/**
 * Per-feature min-max scaling parameters, fitted on one segment only.
 *
 * transform maps x to (x - min) / (max - min); values outside the fitted
 * range pass through the same affine map (they land outside [0, 1]).
 * Constant features are flagged degenerate: they transform to 0.0 and
 * inverse-transform back to the stored constant.
 */
class ScalerParams {
 public:
  ScalerParams() = default;

  std::size_t feature_count() const { return min_.size(); }
  double min(std::size_t f) const { return min_[f]; }
  double max(std::size_t f) const { return max_[f]; }
  bool degenerate(std::size_t f) const { return degenerate_[f]; }

  Tensor transform(const Tensor& matrix) const;
  Tensor inverse_transform(const Tensor& matrix) const;

  /// Params restricted to the first `count` features (used when targets
  /// are a prefix of the input features).
  ScalerParams head(std::size_t count) const;

  static ScalerParams from_raw(std::vector<double> min, std::vector<double> max);

 private:
  friend ScalerParams fit_minmax(const Tensor& segment);
  std::vector<double> min_;
  std::vector<double> max_;
  std::vector<bool> degenerate_;
};

/// Fits per-feature min/max on a [rows, features] segment. Throws on an
/// empty segment.
ScalerParams fit_minmax(const Tensor& segment);

}  // namespace windcast

#endif  // WINDCAST_SCALER_HPP
