#include "windcast/ar.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <stdexcept>
#include <utility>

namespace windcast {

namespace {

using RowMajorMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kRankTolerance = 1e-10;  // relative to the top singular value

/// Design matrix: one row per sample, flattened window plus a trailing
/// intercept column of ones.
RowMajorMatrix build_design(const Tensor& x) {
  const std::size_t n = x.extent(0);
  const std::size_t width = x.extent(1) * x.extent(2);
  RowMajorMatrix design(n, width + 1);
  const double* src = x.data();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < width; ++j) {
      design(i, j) = src[i * width + j];
    }
    design(i, width) = 1.0;
  }
  return design;
}

}  // namespace

ArModel fit_ols(const WindowedDataset& dataset) {
  if (dataset.x.empty()) {
    throw std::invalid_argument("fit_ols: empty dataset");
  }
  const std::size_t n = dataset.sample_count();
  const std::size_t width = dataset.n_steps() * dataset.feature_count();
  const std::size_t targets = dataset.y.cols();

  const RowMajorMatrix design = build_design(dataset.x);
  Eigen::Map<const RowMajorMatrix> y(dataset.y.data(), n, targets);

  Eigen::BDCSVD<RowMajorMatrix> svd(
      design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double top = sv.size() > 0 ? sv(0) : 0.0;
  const bool deficient = top <= 0.0 || sv(sv.size() - 1) < kRankTolerance * top;

  RowMajorMatrix beta;  // [width + 1, targets]
  if (deficient) {
    svd.setThreshold(kRankTolerance);
    beta = svd.solve(y);
  } else {
    beta = design.householderQr().solve(y);
  }

  ArModel model;
  model.n_steps_ = dataset.n_steps();
  model.n_features_ = dataset.feature_count();
  model.rank_deficient_ = deficient;
  Tensor coeffs({width, targets});
  for (std::size_t i = 0; i < width; ++i) {
    for (std::size_t j = 0; j < targets; ++j) {
      coeffs(i, j) = beta(i, j);
    }
  }
  Tensor intercept({targets});
  for (std::size_t j = 0; j < targets; ++j) {
    intercept(j) = beta(width, j);
  }
  model.coefficients_ = std::move(coeffs);
  model.intercept_ = std::move(intercept);
  return model;
}

Tensor ArModel::predict(const Tensor& x) const {
  if (!fitted()) {
    throw std::logic_error("ArModel::predict: model is not fitted");
  }
  if (x.rank() != 3 || x.extent(1) != n_steps_ || x.extent(2) != n_features_) {
    throw std::invalid_argument("ArModel::predict: window shape " +
                                x.shape_string() + " does not match fit");
  }
  const std::size_t n = x.extent(0);
  const std::size_t width = n_steps_ * n_features_;
  const std::size_t targets = coefficients_.cols();
  Tensor flat({n, width}, std::vector<double>(x.values()));
  Tensor out = matmul(flat, coefficients_);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < targets; ++j) {
      out(i, j) += intercept_(j);
    }
  }
  return out;
}

ArModel ArModel::from_raw(Tensor coefficients, Tensor intercept,
                          std::size_t n_steps, std::size_t n_features) {
  if (coefficients.rank() != 2 ||
      coefficients.rows() != n_steps * n_features) {
    throw std::invalid_argument("ArModel::from_raw: coefficient shape " +
                                coefficients.shape_string() +
                                " does not match the recorded lag layout");
  }
  if (intercept.size() != coefficients.cols()) {
    throw std::invalid_argument("ArModel::from_raw: intercept width mismatch");
  }
  ArModel model;
  model.coefficients_ = std::move(coefficients);
  model.intercept_ = std::move(intercept);
  model.n_steps_ = n_steps;
  model.n_features_ = n_features;
  return model;
}

ResidualDiagnostics residual_diagnostics(const ArModel& model,
                                         const WindowedDataset& dataset) {
  const Tensor pred = model.predict(dataset.x);
  if (!pred.same_shape(dataset.y)) {
    throw std::invalid_argument(
        "residual_diagnostics: prediction/target shape mismatch");
  }
  const std::size_t n = pred.rows();
  const std::size_t cols = pred.cols();
  ResidualDiagnostics diag;
  diag.mean.assign(cols, 0.0);
  diag.variance.assign(cols, 0.0);
  for (std::size_t j = 0; j < cols; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sum += dataset.y(i, j) - pred(i, j);
    }
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = dataset.y(i, j) - pred(i, j) - mean;
      ss += r * r;
    }
    diag.mean[j] = mean;
    diag.variance[j] = ss / static_cast<double>(n);
  }
  return diag;
}

}  // namespace windcast
