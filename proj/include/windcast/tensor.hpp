#ifndef WINDCAST_TENSOR_HPP
#define WINDCAST_TENSOR_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace windcast {

/**
 * Dense row-major tensor of doubles with a dynamic rank.
 *
 * The shape is fixed at construction; every extent must be >= 1 and the
 * flat storage always has exactly product(shape) entries. Rank 2 doubles
 * as the feature-matrix type (rows = time, cols = features) used across
 * the data pipeline; rank 3 carries windowed samples and layer activations.
 */
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> shape);
  Tensor(std::vector<std::size_t> shape, std::vector<double> data);

  static Tensor matrix(std::size_t rows, std::size_t cols);
  /// Builds a [rows, cols] tensor from equally sized row vectors.
  static Tensor from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rank() const { return shape_.size(); }
  std::size_t extent(std::size_t axis) const;
  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::size_t rows() const { return extent(0); }
  std::size_t cols() const { return extent(1); }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::vector<double>& values() { return data_; }
  const std::vector<double>& values() const { return data_; }

  // Unchecked element access; shapes are validated at construction.
  double& operator()(std::size_t i) { return data_[i]; }
  double operator()(std::size_t i) const { return data_[i]; }
  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * shape_[1] + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * shape_[1] + j];
  }
  double& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return data_[(i * shape_[1] + j) * shape_[2] + k];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(i * shape_[1] + j) * shape_[2] + k];
  }

  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }
  void fill(double value);
  bool all_finite() const;

  /// Copy of the first `count` columns of a rank-2 tensor.
  Tensor head_columns(std::size_t count) const;

  std::string shape_string() const;

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

/// out = a * b for rank-2 tensors ([m,k] x [k,n] -> [m,n]).
Tensor matmul(const Tensor& a, const Tensor& b);

/// out = a^T * b ([k,m]^T x [k,n] -> [m,n]).
Tensor matmul_transpose_a(const Tensor& a, const Tensor& b);

/// out = a * b^T ([m,k] x [n,k]^T -> [m,n]).
Tensor matmul_transpose_b(const Tensor& a, const Tensor& b);

}  // namespace windcast

#endif  // WINDCAST_TENSOR_HPP
