#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "oracles.hpp"
#include "windcast/metrics.hpp"
#include "windcast/rng.hpp"
#include "windcast/tensor.hpp"

using windcast::r_squared;
using windcast::rmse;
using windcast::RmseReport;
using windcast::Rng;
using windcast::RSquaredReport;
using windcast::Tensor;

namespace {

std::vector<std::vector<double>> to_rows(const Tensor& m) {
  std::vector<std::vector<double>> rows(m.rows(), std::vector<double>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      rows[i][j] = m(i, j);
    }
  }
  return rows;
}

Tensor random_matrix(std::size_t rows, std::size_t cols, Rng& rng,
                     double lo, double hi) {
  Tensor out({rows, cols});
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.data()[i] = rng.uniform(lo, hi);
  }
  return out;
}

}  // namespace

TEST_CASE("perfect predictions score zero error") {
  const Tensor observed = Tensor::from_rows({{1.0, 2.0}, {3.0, 4.0}});
  const RmseReport report = rmse(observed, observed);
  CHECK(report.combined == 0.0);
  CHECK(report.per_column[0] == 0.0);
  CHECK(report.per_column[1] == 0.0);
}

TEST_CASE("pooled rmse of a single row of errors") {
  const Tensor observed = Tensor::from_rows({{3.0, 4.0}});
  const Tensor predicted = Tensor::from_rows({{0.0, 0.0}});
  const RmseReport report = rmse(observed, predicted);
  CHECK(report.combined == doctest::Approx(std::sqrt(12.5)).epsilon(1e-15));
  CHECK(report.per_column[0] == doctest::Approx(3.0));
  CHECK(report.per_column[1] == doctest::Approx(4.0));
}

TEST_CASE("pooled rmse averages squared error over rows times columns") {
  const Tensor observed = Tensor::from_rows({{1.0, 0.0}, {0.0, 2.0}});
  const Tensor predicted = Tensor::from_rows({{0.0, 0.0}, {0.0, 0.0}});
  const RmseReport report = rmse(observed, predicted);
  CHECK(report.combined == doctest::Approx(std::sqrt(5.0 / 4.0)).epsilon(1e-15));
}

TEST_CASE("r squared hits the textbook anchor points") {
  const Tensor observed = Tensor::from_rows({{1.0}, {2.0}, {3.0}});
  // Perfect fit.
  RSquaredReport perfect = r_squared(observed, observed);
  CHECK(perfect.combined == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_FALSE(perfect.degenerate);
  // Mean predictor scores exactly zero.
  const Tensor mean_pred = Tensor::from_rows({{2.0}, {2.0}, {2.0}});
  RSquaredReport zero = r_squared(observed, mean_pred);
  CHECK(zero.combined == doctest::Approx(0.0).epsilon(1e-15));
  // One off-by-one at the extreme: SSE = 1, SST = 2.
  const Tensor near = Tensor::from_rows({{1.0}, {2.0}, {4.0}});
  RSquaredReport half = r_squared(observed, near);
  CHECK(half.combined == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("combined r squared averages columns uniformly") {
  const Tensor observed = Tensor::from_rows({{1.0, 10.0}, {2.0, 20.0}, {3.0, 30.0}});
  Tensor predicted = observed;
  predicted(2, 0) = 4.0;  // column 0 drops to R² = 0.5, column 1 stays 1.0
  const RSquaredReport report = r_squared(observed, predicted);
  CHECK(report.per_column[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(report.per_column[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(report.combined == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("metrics agree with the direct-formula oracles to 1e-12") {
  Rng rng(909);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t rows = 2 + rng.below(60);
    const std::size_t cols = 1 + rng.below(4);
    const Tensor observed = random_matrix(rows, cols, rng, -20.0, 20.0);
    const Tensor predicted = random_matrix(rows, cols, rng, -20.0, 20.0);
    const auto obs_rows = to_rows(observed);
    const auto pred_rows = to_rows(predicted);

    const RmseReport rmse_report = rmse(observed, predicted);
    CHECK(std::fabs(rmse_report.combined -
                    oracles::rmse_direct(obs_rows, pred_rows)) < 1e-12);
    const RSquaredReport r2_report = r_squared(observed, predicted);
    double mean_r2 = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      const double col_rmse = oracles::rmse_column_direct(obs_rows, pred_rows, j);
      CHECK(std::fabs(rmse_report.per_column[j] - col_rmse) < 1e-12);
      const double col_r2 = oracles::r2_column_direct(obs_rows, pred_rows, j);
      CHECK(std::fabs(r2_report.per_column[j] - col_r2) < 1e-12);
      mean_r2 += col_r2;
    }
    mean_r2 /= static_cast<double>(cols);
    CHECK_FALSE(r2_report.degenerate);
    CHECK(std::fabs(r2_report.combined - mean_r2) < 1e-12);
  }
}

TEST_CASE("constant observed column is flagged degenerate") {
  const Tensor observed = Tensor::from_rows({{5.0, 1.0}, {5.0, 2.0}, {5.0, 3.0}});
  const Tensor predicted = Tensor::from_rows({{5.0, 1.0}, {5.0, 2.0}, {5.0, 3.0}});
  const RSquaredReport report = r_squared(observed, predicted);
  CHECK(report.degenerate);
  REQUIRE(report.degenerate_columns.size() == 2);
  CHECK(report.degenerate_columns[0]);
  CHECK_FALSE(report.degenerate_columns[1]);
  CHECK(std::isnan(report.per_column[0]));
  CHECK(report.per_column[1] == doctest::Approx(1.0));
  CHECK(std::isnan(report.combined));
}

TEST_CASE("r squared is invariant under affine rescaling of the units") {
  Rng rng(77);
  const Tensor observed = random_matrix(40, 2, rng, 0.0, 10.0);
  const Tensor predicted = random_matrix(40, 2, rng, 0.0, 10.0);
  Tensor observed_scaled = observed;
  Tensor predicted_scaled = predicted;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    observed_scaled.data()[i] = 3.5 * observed.data()[i] - 12.0;
    predicted_scaled.data()[i] = 3.5 * predicted.data()[i] - 12.0;
  }
  const RSquaredReport plain = r_squared(observed, predicted);
  const RSquaredReport scaled = r_squared(observed_scaled, predicted_scaled);
  for (std::size_t j = 0; j < 2; ++j) {
    CHECK(scaled.per_column[j] ==
          doctest::Approx(plain.per_column[j]).epsilon(1e-12));
  }
}

TEST_CASE("rmse shifts out of a common offset and scales with the units") {
  Rng rng(78);
  const Tensor observed = random_matrix(30, 2, rng, 0.0, 5.0);
  const Tensor predicted = random_matrix(30, 2, rng, 0.0, 5.0);
  Tensor observed_shift = observed;
  Tensor predicted_shift = predicted;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    observed_shift.data()[i] += 100.0;
    predicted_shift.data()[i] += 100.0;
  }
  const double base = rmse(observed, predicted).combined;
  CHECK(rmse(observed_shift, predicted_shift).combined ==
        doctest::Approx(base).epsilon(1e-9));

  Tensor observed_scaled = observed;
  Tensor predicted_scaled = predicted;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    observed_scaled.data()[i] *= 4.0;
    predicted_scaled.data()[i] *= 4.0;
  }
  CHECK(rmse(observed_scaled, predicted_scaled).combined ==
        doctest::Approx(4.0 * base).epsilon(1e-12));
}

TEST_CASE("metric inputs are validated") {
  const Tensor square = Tensor::from_rows({{1.0, 2.0}, {3.0, 4.0}});
  CHECK_THROWS_WITH_AS(rmse(square, Tensor::from_rows({{1.0}, {2.0}})),
                       doctest::Contains("metrics"), std::invalid_argument);
  CHECK_THROWS_AS(rmse(Tensor({4}), Tensor({4})), std::invalid_argument);
  CHECK_THROWS_AS(r_squared(square, Tensor({2, 3})), std::invalid_argument);
}
