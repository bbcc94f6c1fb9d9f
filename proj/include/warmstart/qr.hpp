#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "warmstart/dense.hpp"
#include "warmstart/vector.hpp"

namespace warmstart {

struct QrFactors {
  DenseMatrix q;  // n x m, orthonormal columns
  DenseMatrix r;  // m x m, upper triangular, nonnegative diagonal
};

/// Reduced QR of a tall matrix (rows >= cols) by Householder reflections.
/// Rank deficiency is tolerated; zero diagonal entries of R are left for the
/// caller to inspect.
inline QrFactors qr_reduced(const DenseMatrix& b) {
  const std::size_t n = b.rows();
  const std::size_t m = b.cols();
  if (n < m) throw std::invalid_argument("qr_reduced: requires rows >= cols");

  DenseMatrix work = b;
  // Reflector k is stored as a unit vector of length n-k.
  std::vector<Vector> reflectors(m);

  for (std::size_t k = 0; k < m; ++k) {
    double colnorm = 0.0;
    for (std::size_t i = k; i < n; ++i) colnorm += work(i, k) * work(i, k);
    colnorm = std::sqrt(colnorm);

    Vector v(n - k, 0.0);
    if (colnorm > 0.0) {
      const double head = work(k, k);
      const double alpha = (head >= 0.0) ? -colnorm : colnorm;
      for (std::size_t i = k; i < n; ++i) v[i - k] = work(i, k);
      v[0] -= alpha;
      double vnorm = 0.0;
      for (double e : v) vnorm += e * e;
      vnorm = std::sqrt(vnorm);
      if (vnorm > 0.0) {
        for (double& e : v) e /= vnorm;
        // Apply I - 2 v v^T to the trailing block.
        for (std::size_t j = k; j < m; ++j) {
          double proj = 0.0;
          for (std::size_t i = k; i < n; ++i) proj += v[i - k] * work(i, j);
          proj *= 2.0;
          for (std::size_t i = k; i < n; ++i) work(i, j) -= proj * v[i - k];
        }
      }
      work(k, k) = alpha;
      for (std::size_t i = k + 1; i < n; ++i) work(i, k) = 0.0;
    }
    reflectors[k] = std::move(v);
  }

  QrFactors f;
  f.r = DenseMatrix(m, m);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i <= j; ++i) f.r(i, j) = work(i, j);

  // Q = H_0 H_1 ... H_{m-1} [I_m; 0], applied back to front.
  f.q = DenseMatrix(n, m);
  for (std::size_t j = 0; j < m; ++j) f.q(j, j) = 1.0;
  for (std::size_t k = m; k-- > 0;) {
    const Vector& v = reflectors[k];
    if (v.empty()) continue;
    for (std::size_t j = 0; j < m; ++j) {
      double proj = 0.0;
      for (std::size_t i = k; i < n; ++i) proj += v[i - k] * f.q(i, j);
      proj *= 2.0;
      for (std::size_t i = k; i < n; ++i) f.q(i, j) -= proj * v[i - k];
    }
  }

  // Sign convention: nonnegative diagonal of R.
  for (std::size_t k = 0; k < m; ++k) {
    if (f.r(k, k) < 0.0) {
      for (std::size_t j = k; j < m; ++j) f.r(k, j) = -f.r(k, j);
      for (std::size_t i = 0; i < n; ++i) f.q(i, k) = -f.q(i, k);
    }
  }
  return f;
}

namespace detail {

// Back substitution with the rank policy: diagonal entries at or below
// 1e-12 * max |R_jj| are treated as zero and the component is dropped.
inline Vector solve_upper_with_rank_policy(const DenseMatrix& r, const Vector& y) {
  const std::size_t m = r.cols();
  double dmax = 0.0;
  for (std::size_t j = 0; j < m; ++j) dmax = std::max(dmax, std::abs(r(j, j)));
  const double threshold = 1e-12 * dmax;

  Vector z(m, 0.0);
  for (std::size_t i = m; i-- > 0;) {
    if (std::abs(r(i, i)) <= threshold) {
      z[i] = 0.0;
      continue;
    }
    double s = y[i];
    for (std::size_t j = i + 1; j < m; ++j) s -= r(i, j) * z[j];
    z[i] = s / r(i, i);
  }
  return z;
}

}  // namespace detail

/// Least-squares minimizer of ||B z - rhs||_2 via reduced QR.
inline Vector lstsq(const DenseMatrix& b, const Vector& rhs) {
  if (rhs.size() != b.rows()) throw std::invalid_argument("lstsq: dimension mismatch");
  const QrFactors f = qr_reduced(b);
  const Vector y = matvec_transposed(f.q, rhs);
  return detail::solve_upper_with_rank_policy(f.r, y);
}

/// Column-wise least squares with a shared factorization: minimizes
/// ||B Z - Rhs||_F over Z.
inline DenseMatrix lstsq_multi(const DenseMatrix& b, const DenseMatrix& rhs) {
  if (rhs.rows() != b.rows()) throw std::invalid_argument("lstsq_multi: dimension mismatch");
  const QrFactors f = qr_reduced(b);
  DenseMatrix z(b.cols(), rhs.cols());
  for (std::size_t j = 0; j < rhs.cols(); ++j) {
    const Vector y = matvec_transposed(f.q, rhs.column(j));
    z.set_column(j, detail::solve_upper_with_rank_policy(f.r, y));
  }
  return z;
}

}  // namespace warmstart
