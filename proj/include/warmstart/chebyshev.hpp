#pragma once

#include <cstddef>
#include <stdexcept>

#include "warmstart/dense.hpp"
#include "warmstart/qr.hpp"
#include "warmstart/vector.hpp"

namespace warmstart {

/// [T_0(t), ..., T_R(t)] by the three-term recurrence, valid for all real t.
inline Vector cheb_vector(std::size_t degree, double t) {
  Vector q(degree + 1);
  q[0] = 1.0;
  if (degree >= 1) q[1] = t;
  for (std::size_t k = 2; k <= degree; ++k) q[k] = 2.0 * t * q[k - 1] - q[k - 2];
  return q;
}

/// Equispaced nodes on [-1, 1] with endpoints included.
inline Vector equispaced_nodes(std::size_t count) {
  if (count < 2) throw std::invalid_argument("equispaced_nodes: need at least 2 nodes");
  Vector t(count);
  const double step = 2.0 / static_cast<double>(count - 1);
  for (std::size_t j = 0; j < count; ++j) t[j] = -1.0 + step * static_cast<double>(j);
  t[count - 1] = 1.0;
  return t;
}

/// Chebyshev-Vandermonde matrix, (degree+1) x nodes, entry (k, j) = T_k(t_j).
inline DenseMatrix cheb_vandermonde(std::size_t degree, const Vector& nodes) {
  DenseMatrix q(degree + 1, nodes.size());
  for (std::size_t j = 0; j < nodes.size(); ++j) q.set_column(j, cheb_vector(degree, nodes[j]));
  return q;
}

/// Least-squares Chebyshev fit of vector-valued samples on equispaced nodes.
struct ChebFit {
  DenseMatrix coeffs;  // n x (degree+1)
  std::size_t degree = 0;
  Vector nodes;
};

/// Minimizes ||samples - C * Q_R(nodes)||_F over coefficient matrices C. The
/// pseudoinverse is applied through a QR factorization of the transposed
/// Vandermonde matrix, which behaves better than the normal equations.
inline ChebFit cheb_lsq_fit(const DenseMatrix& samples, std::size_t degree) {
  const std::size_t node_count = samples.cols();
  if (degree + 1 > node_count)
    throw std::invalid_argument("cheb_lsq_fit: degree must be at most nodes-1");

  ChebFit fit;
  fit.degree = degree;
  fit.nodes = equispaced_nodes(node_count);

  const DenseMatrix vand_t = transpose(cheb_vandermonde(degree, fit.nodes));
  fit.coeffs = transpose(lstsq_multi(vand_t, transpose(samples)));
  return fit;
}

/// Evaluates the fitted polynomial; for t beyond the node interval this is the
/// least-squares extrapolant.
inline Vector extrapolate(const ChebFit& fit, double t) {
  return matvec(fit.coeffs, cheb_vector(fit.degree, t));
}

}  // namespace warmstart
