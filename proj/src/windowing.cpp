#include "windcast/windowing.hpp"

#include <stdexcept>
#include <string>

namespace windcast {

std::size_t supervised_sample_count(std::size_t length, std::size_t n_steps,
                                    std::size_t horizon) {
  if (length < n_steps + horizon) {
    return 0;
  }
  return length - n_steps - horizon + 1;
}

namespace {

WindowedDataset window_matrix(const Tensor& source, const Tensor& targets,
                              std::size_t n_steps, std::size_t horizon,
                              const char* what) {
  if (source.rank() != 2) {
    throw std::invalid_argument(std::string(what) + ": [rows, features] matrix required");
  }
  if (n_steps < 1 || horizon < 1) {
    throw std::invalid_argument(std::string(what) + ": n_steps and horizon must be >= 1");
  }
  const std::size_t length = source.rows();
  const std::size_t features = source.cols();
  const std::size_t samples = supervised_sample_count(length, n_steps, horizon);
  if (samples == 0) {
    throw std::invalid_argument(
        std::string(what) + ": insufficient samples (L=" + std::to_string(length) +
        ", n_steps=" + std::to_string(n_steps) +
        ", horizon=" + std::to_string(horizon) + ")");
  }
  WindowedDataset ds;
  ds.horizon = horizon;
  ds.x = Tensor({samples, n_steps, features});
  ds.y = Tensor({samples, features});
  ds.origin_indices.resize(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    for (std::size_t j = 0; j < n_steps; ++j) {
      for (std::size_t f = 0; f < features; ++f) {
        ds.x(i, j, f) = source(i + j, f);
      }
    }
    const std::size_t target_row = i + n_steps - 1 + horizon;
    ds.origin_indices[i] = target_row;
    for (std::size_t f = 0; f < features; ++f) {
      ds.y(i, f) = targets(target_row, f);
    }
  }
  return ds;
}

}  // namespace

WindowedDataset make_supervised(const Tensor& matrix, std::size_t n_steps,
                                std::size_t horizon) {
  return window_matrix(matrix, matrix, n_steps, horizon, "make_supervised");
}

WindowedDataset reshape_stage2(const Tensor& pred1, const Tensor& truth,
                               std::size_t s2_steps, std::size_t s2_horizon) {
  if (pred1.rank() != 2 || !pred1.same_shape(truth)) {
    throw std::invalid_argument("reshape_stage2: pred1 " + pred1.shape_string() +
                                " and truth " + truth.shape_string() +
                                " must be matrices of identical shape");
  }
  return window_matrix(pred1, truth, s2_steps, s2_horizon, "reshape_stage2");
}

WindowedDataset restrict_targets(WindowedDataset dataset, std::size_t count) {
  dataset.y = dataset.y.head_columns(count);
  return dataset;
}

}  // namespace windcast
