#include "windcast/tensor.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace windcast {

namespace {

std::size_t checked_product(const std::vector<std::size_t>& shape) {
  if (shape.empty()) {
    throw std::invalid_argument("Tensor: shape must have at least one axis");
  }
  std::size_t n = 1;
  for (std::size_t extent : shape) {
    if (extent == 0) {
      throw std::invalid_argument("Tensor: every extent must be >= 1");
    }
    n *= extent;
  }
  return n;
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> shape)
    : shape_(std::move(shape)), data_(checked_product(shape_), 0.0) {}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (checked_product(shape_) != data_.size()) {
    throw std::invalid_argument("Tensor: data length does not match shape " +
                                shape_string());
  }
}

Tensor Tensor::matrix(std::size_t rows, std::size_t cols) {
  return Tensor({rows, cols});
}

Tensor Tensor::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) {
    throw std::invalid_argument("Tensor::from_rows: no rows");
  }
  const std::size_t cols = rows.front().size();
  Tensor out({rows.size(), cols});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      throw std::invalid_argument("Tensor::from_rows: ragged rows");
    }
    for (std::size_t j = 0; j < cols; ++j) {
      out(i, j) = rows[i][j];
    }
  }
  return out;
}

std::size_t Tensor::extent(std::size_t axis) const {
  if (axis >= shape_.size()) {
    throw std::out_of_range("Tensor::extent: axis " + std::to_string(axis) +
                            " out of range for shape " + shape_string());
  }
  return shape_[axis];
}

void Tensor::fill(double value) {
  for (double& v : data_) {
    v = value;
  }
}

bool Tensor::all_finite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) {
      return false;
    }
  }
  return true;
}

Tensor Tensor::head_columns(std::size_t count) const {
  if (rank() != 2) {
    throw std::invalid_argument("Tensor::head_columns: rank-2 tensor required");
  }
  if (count == 0 || count > cols()) {
    throw std::invalid_argument("Tensor::head_columns: bad column count");
  }
  Tensor out({rows(), count});
  for (std::size_t i = 0; i < rows(); ++i) {
    for (std::size_t j = 0; j < count; ++j) {
      out(i, j) = (*this)(i, j);
    }
  }
  return out;
}

std::string Tensor::shape_string() const {
  std::ostringstream oss;
  oss << "[";
  for (std::size_t i = 0; i < shape_.size(); ++i) {
    oss << (i ? ", " : "") << shape_[i];
  }
  oss << "]";
  return oss.str();
}

namespace {

void require_matmul_shapes(const Tensor& a, const Tensor& b, std::size_t inner_a,
                           std::size_t inner_b, const char* what) {
  if (a.rank() != 2 || b.rank() != 2 || inner_a != inner_b) {
    throw std::invalid_argument(std::string(what) + ": incompatible shapes " +
                                a.shape_string() + " x " + b.shape_string());
  }
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  require_matmul_shapes(a, b, a.cols(), b.rows(), "matmul");
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  Tensor out({m, n});
  const double* pa = a.data();
  const double* pb = b.data();
  double* po = out.data();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = pa[i * k + p];
      if (aip == 0.0) continue;
      const double* brow = pb + p * n;
      double* orow = po + i * n;
      for (std::size_t j = 0; j < n; ++j) {
        orow[j] += aip * brow[j];
      }
    }
  }
  return out;
}

Tensor matmul_transpose_a(const Tensor& a, const Tensor& b) {
  require_matmul_shapes(a, b, a.rows(), b.rows(), "matmul_transpose_a");
  const std::size_t m = a.cols(), k = a.rows(), n = b.cols();
  Tensor out({m, n});
  const double* pa = a.data();
  const double* pb = b.data();
  double* po = out.data();
  for (std::size_t p = 0; p < k; ++p) {
    const double* arow = pa + p * m;
    const double* brow = pb + p * n;
    for (std::size_t i = 0; i < m; ++i) {
      const double api = arow[i];
      if (api == 0.0) continue;
      double* orow = po + i * n;
      for (std::size_t j = 0; j < n; ++j) {
        orow[j] += api * brow[j];
      }
    }
  }
  return out;
}

Tensor matmul_transpose_b(const Tensor& a, const Tensor& b) {
  require_matmul_shapes(a, b, a.cols(), b.cols(), "matmul_transpose_b");
  const std::size_t m = a.rows(), k = a.cols(), n = b.rows();
  Tensor out({m, n});
  const double* pa = a.data();
  const double* pb = b.data();
  double* po = out.data();
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = pa + i * k;
    double* orow = po + i * n;
    for (std::size_t j = 0; j < n; ++j) {
      const double* brow = pb + j * k;
      double acc = 0.0;
      for (std::size_t p = 0; p < k; ++p) {
        acc += arow[p] * brow[p];
      }
      orow[j] = acc;
    }
  }
  return out;
}

}  // namespace windcast
