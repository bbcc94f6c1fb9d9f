#pragma once

#include <cmath>
#include <cstddef>
#include <cstring>
#include <stdexcept>
#include <vector>

#include "warmstart/vector.hpp"

namespace warmstart {

/// Dense column-major matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

  double* col(std::size_t j) { return data_.data() + j * rows_; }
  const double* col(std::size_t j) const { return data_.data() + j * rows_; }

  Vector column(std::size_t j) const {
    return Vector(col(j), col(j) + rows_);
  }

  void set_column(std::size_t j, const Vector& v) {
    if (v.size() != rows_) throw std::invalid_argument("set_column: length mismatch");
    std::memcpy(col(j), v.data(), rows_ * sizeof(double));
  }

  std::vector<double>& values() { return data_; }
  const std::vector<double>& values() const { return data_; }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline Vector matvec(const DenseMatrix& a, const Vector& x) {
  if (x.size() != a.cols()) throw std::invalid_argument("matvec: dimension mismatch");
  Vector y(a.rows(), 0.0);
  for (std::size_t j = 0; j < a.cols(); ++j) {
    const double* cj = a.col(j);
    const double xj = x[j];
    for (std::size_t i = 0; i < a.rows(); ++i) y[i] += cj[i] * xj;
  }
  return y;
}

inline Vector matvec_transposed(const DenseMatrix& a, const Vector& x) {
  if (x.size() != a.rows()) throw std::invalid_argument("matvec_transposed: dimension mismatch");
  Vector y(a.cols(), 0.0);
  for (std::size_t j = 0; j < a.cols(); ++j) {
    const double* cj = a.col(j);
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += cj[i] * x[i];
    y[j] = s;
  }
  return y;
}

inline DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: dimension mismatch");
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    double* cj = c.col(j);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double bkj = b(k, j);
      if (bkj == 0.0) continue;
      const double* ak = a.col(k);
      for (std::size_t i = 0; i < a.rows(); ++i) cj[i] += ak[i] * bkj;
    }
  }
  return c;
}

inline DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols(), a.rows());
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) t(j, i) = a(i, j);
  return t;
}

inline double frobenius_norm(const DenseMatrix& a) {
  double s = 0.0;
  for (double e : a.values()) s += e * e;
  return std::sqrt(s);
}

}  // namespace warmstart
