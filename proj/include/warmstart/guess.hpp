#pragma once

#include <chrono>
#include <cstddef>
#include <stdexcept>

#include "warmstart/dense.hpp"
#include "warmstart/history.hpp"
#include "warmstart/qr.hpp"
#include "warmstart/sparse.hpp"
#include "warmstart/svd.hpp"
#include "warmstart/vector.hpp"

namespace warmstart {

struct GuessReport {
  Vector guess;
  std::size_t reduced_dim = 0;
  double guess_residual = 0.0;  // ||A guess - b||_2
  double basis_time_s = 0.0;    // filled by the caller that built the basis
  double lstsq_time_s = 0.0;
};

/// First m left singular vectors of the stored history.
inline DenseMatrix pod_basis(const HistoryWindow& h, std::size_t m) {
  if (m == 0 || m > h.size())
    throw std::invalid_argument("pod_basis: m must be in [1, stored columns]");
  const SvdThin svd = svd_thin(h.snapshot());
  DenseMatrix q(h.dim(), m);
  for (std::size_t j = 0; j < m; ++j) q.set_column(j, svd.u.column(j));
  return q;
}

/// Residual-minimizing element of span(basis): forms W = A * basis one sparse
/// product per column, solves min_z ||W z - b||, and returns basis * z.
inline GuessReport compute_initial_guess(const SparseCsrMatrix& a, const Vector& b,
                                         const DenseMatrix& basis) {
  if (basis.rows() != a.n_cols || b.size() != a.n_rows)
    throw std::invalid_argument("compute_initial_guess: dimension mismatch");

  const auto t0 = std::chrono::steady_clock::now();
  DenseMatrix w(a.n_rows, basis.cols());
  for (std::size_t j = 0; j < basis.cols(); ++j) w.set_column(j, spmv(a, basis.column(j)));

  const Vector z = lstsq(w, b);

  GuessReport rep;
  rep.reduced_dim = basis.cols();
  rep.guess = matvec(basis, z);
  rep.guess_residual = norm2(subtract(matvec(w, z), b));
  rep.lstsq_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace warmstart
