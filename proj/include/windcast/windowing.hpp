#ifndef WINDCAST_WINDOWING_HPP
#define WINDCAST_WINDOWING_HPP

#include <cstddef>
#include <vector>

#include "windcast/tensor.hpp"

namespace windcast {

/**
 * Supervised windowed view of a feature matrix for a fixed horizon.
 *
 * x[i, j, :] = source row (i + j) for j in [0, n_steps)
 * y[i, :]    = source row (i + n_steps - 1 + horizon)
 * sample count = L - n_steps - horizon + 1
 *
 * origin_indices[i] records the source row index of sample i's target.
 */
struct WindowedDataset {
  Tensor x;  // [n_samples, n_steps, n_features]
  Tensor y;  // [n_samples, n_features]
  std::size_t horizon = 1;
  std::vector<std::size_t> origin_indices;

  std::size_t sample_count() const { return x.extent(0); }
  std::size_t n_steps() const { return x.extent(1); }
  std::size_t feature_count() const { return x.extent(2); }
};

/// Number of supervised samples a length-L source yields, or 0 when the
/// window does not fit.
std::size_t supervised_sample_count(std::size_t length, std::size_t n_steps,
                                    std::size_t horizon);

/**
 * Slides a lag window over a [L, features] matrix. Throws
 * "insufficient samples" when L - n_steps - horizon + 1 <= 0.
 */
WindowedDataset make_supervised(const Tensor& matrix, std::size_t n_steps,
                                std::size_t horizon);

/**
 * Second-stage shaping: windows a first-stage prediction matrix while the
 * targets come from the aligned ground truth at the corresponding rows.
 * pred1 and truth must have identical shapes.
 */
WindowedDataset reshape_stage2(const Tensor& pred1, const Tensor& truth,
                               std::size_t s2_steps, std::size_t s2_horizon);

/// Keeps only the first `count` target columns (input-only features such
/// as wind direction are dropped from y).
WindowedDataset restrict_targets(WindowedDataset dataset, std::size_t count);

}  // namespace windcast

#endif  // WINDCAST_WINDOWING_HPP
