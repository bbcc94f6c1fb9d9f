#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "warmstart/dense.hpp"
#include "warmstart/vector.hpp"

namespace warmstart {

struct SvdThin {
  DenseMatrix u;  // n x m
  Vector s;       // length m, nonincreasing, nonnegative
  DenseMatrix v;  // m x m
};

namespace detail {

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Returns
/// eigenvalues in-place on the diagonal of g; v accumulates the rotations.
inline void jacobi_eigen(DenseMatrix& g, DenseMatrix& v) {
  const std::size_t m = g.rows();
  v = DenseMatrix::identity(m);
  if (m < 2) return;

  double offscale = 0.0;
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < m; ++i)
      if (i != j) offscale = std::max(offscale, std::abs(g(i, j)));
  double diagscale = 0.0;
  for (std::size_t i = 0; i < m; ++i) diagscale = std::max(diagscale, std::abs(g(i, i)));
  const double stop = 1e-16 * std::max(offscale, diagscale);

  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < m; ++p)
      for (std::size_t q = p + 1; q < m; ++q) off = std::max(off, std::abs(g(p, q)));
    if (off <= stop) break;

    for (std::size_t p = 0; p + 1 < m; ++p) {
      for (std::size_t q = p + 1; q < m; ++q) {
        const double gpq = g(p, q);
        if (std::abs(gpq) <= stop) continue;
        const double theta = (g(q, q) - g(p, p)) / (2.0 * gpq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < m; ++k) {
          const double gkp = g(k, p);
          const double gkq = g(k, q);
          g(k, p) = c * gkp - s * gkq;
          g(k, q) = s * gkp + c * gkq;
        }
        for (std::size_t k = 0; k < m; ++k) {
          const double gpk = g(p, k);
          const double gqk = g(q, k);
          g(p, k) = c * gpk - s * gqk;
          g(q, k) = s * gpk + c * gqk;
        }
        for (std::size_t k = 0; k < m; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
}

// Orthogonalize column k of u against columns 0..k-1 (two passes) and
// normalize; falls back to coordinate directions when the remainder vanishes.
inline void orthonormalize_column(DenseMatrix& u, std::size_t k) {
  const std::size_t n = u.rows();
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t j = 0; j < k; ++j) {
      double proj = 0.0;
      for (std::size_t i = 0; i < n; ++i) proj += u(i, j) * u(i, k);
      for (std::size_t i = 0; i < n; ++i) u(i, k) -= proj * u(i, j);
    }
  }
  double nrm = 0.0;
  for (std::size_t i = 0; i < n; ++i) nrm += u(i, k) * u(i, k);
  nrm = std::sqrt(nrm);
  if (nrm > 1e-300) {
    for (std::size_t i = 0; i < n; ++i) u(i, k) /= nrm;
    return;
  }
  // Degenerate remainder: seed with coordinate directions. Some seed always
  // leaves a remainder of at least sqrt((n-k)/n) >= 1/sqrt(n).
  const double accept = 0.5 / std::sqrt(static_cast<double>(n));
  for (std::size_t seed = 0; seed < n; ++seed) {
    for (std::size_t i = 0; i < n; ++i) u(i, k) = (i == seed) ? 1.0 : 0.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < k; ++j) {
        double proj = 0.0;
        for (std::size_t i = 0; i < n; ++i) proj += u(i, j) * u(i, k);
        for (std::size_t i = 0; i < n; ++i) u(i, k) -= proj * u(i, j);
      }
    }
    double rn = 0.0;
    for (std::size_t i = 0; i < n; ++i) rn += u(i, k) * u(i, k);
    rn = std::sqrt(rn);
    if (rn > accept) {
      for (std::size_t i = 0; i < n; ++i) u(i, k) /= rn;
      return;
    }
  }
}

}  // namespace detail

/// Thin SVD of a tall matrix (rows >= cols) via Jacobi eigendecomposition of
/// the small Gram matrix B^T B. Singular values are recomputed as ||B v_k||_2,
/// which recovers full accuracy for the small ones; left vectors whose
/// singular value falls below 1e-10 * s[0] are re-orthonormalized against the
/// preceding columns instead of divided by s.
inline SvdThin svd_thin(const DenseMatrix& b) {
  const std::size_t n = b.rows();
  const std::size_t m = b.cols();
  if (n < m) throw std::invalid_argument("svd_thin: requires rows >= cols");

  DenseMatrix gram(m, m);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i <= j; ++i) {
      double s = 0.0;
      const double* ci = b.col(i);
      const double* cj = b.col(j);
      for (std::size_t k = 0; k < n; ++k) s += ci[k] * cj[k];
      gram(i, j) = s;
      gram(j, i) = s;
    }

  DenseMatrix v;
  detail::jacobi_eigen(gram, v);

  // sigma_k = ||B v_k||, then sort descending.
  std::vector<Vector> images(m);
  Vector sigma(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    images[k] = matvec(b, v.column(k));
    sigma[k] = norm2(images[k]);
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t c) { return sigma[a] > sigma[c]; });

  SvdThin out;
  out.s.resize(m);
  out.v = DenseMatrix(m, m);
  out.u = DenseMatrix(n, m);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t src = order[k];
    out.s[k] = sigma[src];
    out.v.set_column(k, v.column(src));
    out.u.set_column(k, images[src]);
  }

  const double smax = out.s.empty() ? 0.0 : out.s[0];
  const double tiny = 1e-10 * smax;
  for (std::size_t k = 0; k < m; ++k) {
    if (out.s[k] > tiny && out.s[k] > 0.0) {
      double* uk = out.u.col(k);
      for (std::size_t i = 0; i < n; ++i) uk[i] /= out.s[k];
      // One re-orthogonalization pass keeps clustered columns orthonormal.
      for (std::size_t j = 0; j < k; ++j) {
        double proj = 0.0;
        for (std::size_t i = 0; i < n; ++i) proj += out.u(i, j) * uk[i];
        for (std::size_t i = 0; i < n; ++i) uk[i] -= proj * out.u(i, j);
      }
      double nrm = 0.0;
      for (std::size_t i = 0; i < n; ++i) nrm += uk[i] * uk[i];
      nrm = std::sqrt(nrm);
      if (nrm > 0.0)
        for (std::size_t i = 0; i < n; ++i) uk[i] /= nrm;
    } else {
      detail::orthonormalize_column(out.u, k);
    }
  }
  return out;
}

/// Singular values in nonincreasing order, for either orientation.
inline Vector singular_values(const DenseMatrix& b) {
  if (b.rows() >= b.cols()) return svd_thin(b).s;
  return svd_thin(transpose(b)).s;
}

}  // namespace warmstart
