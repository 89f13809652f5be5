#ifndef WINDCAST_AR_HPP
#define WINDCAST_AR_HPP

#include <cstddef>
#include <vector>

#include "windcast/tensor.hpp"
#include "windcast/windowing.hpp"

namespace windcast {

/**
 * Multi-output autoregressive linear model: ordinary least squares with
 * an intercept, one shared design factorization for all output columns.
 *
 * Serves both as the standalone lag-regression baseline and as the
 * second stage of the hybrid forecaster.
 */
class ArModel {
 public:
  ArModel() = default;

  std::size_t n_steps() const { return n_steps_; }
  std::size_t n_features() const { return n_features_; }
  bool fitted() const { return n_features_ != 0; }

  /// True when the design matrix was rank deficient and the fit fell back
  /// to the minimum-norm pseudoinverse.
  bool rank_deficient() const { return rank_deficient_; }

  /// [n_steps * n_features, n_features]; row-major lag order matches the
  /// flattened window (oldest lag first).
  const Tensor& coefficients() const { return coefficients_; }
  const Tensor& intercept() const { return intercept_; }  // [n_features]

  /// Flattens each window to a row, appends the intercept, multiplies.
  /// Throws on a shape mismatch with the fitted design.
  Tensor predict(const Tensor& x) const;

  static ArModel from_raw(Tensor coefficients, Tensor intercept,
                          std::size_t n_steps, std::size_t n_features);

 private:
  friend ArModel fit_ols(const WindowedDataset& dataset);
  Tensor coefficients_;
  Tensor intercept_;
  std::size_t n_steps_ = 0;
  std::size_t n_features_ = 0;
  bool rank_deficient_ = false;
};

/**
 * Least-squares fit of windowed lags onto the targets.
 *
 * Full-rank designs are solved by QR; designs whose smallest singular
 * value falls below 1e-10 of the largest are solved by the minimum-norm
 * pseudoinverse and flagged via rank_deficient(). Throws on an empty
 * dataset.
 */
ArModel fit_ols(const WindowedDataset& dataset);

struct ResidualDiagnostics {
  std::vector<double> mean;      // per output column
  std::vector<double> variance;  // population variance (divide by n)
};

ResidualDiagnostics residual_diagnostics(const ArModel& model,
                                         const WindowedDataset& dataset);

}  // namespace windcast

#endif  // WINDCAST_AR_HPP
