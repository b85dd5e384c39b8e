#pragma once

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace gdgnn {

// Dense row-major matrix of doubles. Small and boring on purpose: every
// model at desk scale fits comfortably in a few MB, so there is no BLAS
// backend, just contiguous storage and tight loops.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix zeros_like(const Matrix& m) { return Matrix(m.rows_, m.cols_); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) {
    assert(r < rows_ && c < cols_);
    return data_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    assert(r < rows_ && c < cols_);
    return data_[r * cols_ + c];
  }

  double* row_ptr(std::size_t r) { return data_.data() + r * cols_; }
  const double* row_ptr(std::size_t r) const { return data_.data() + r * cols_; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// c = a * b
Matrix matmul(const Matrix& a, const Matrix& b);
// c = a * b^T
Matrix matmul_nt(const Matrix& a, const Matrix& b);
// c = a^T * b
Matrix matmul_tn(const Matrix& a, const Matrix& b);

void add_inplace(Matrix& a, const Matrix& b);
bool all_finite(const Matrix& m);

}  // namespace gdgnn
