#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "warmstart/dense.hpp"
#include "warmstart/ilu.hpp"
#include "warmstart/sparse.hpp"
#include "warmstart/vector.hpp"

namespace warmstart {

struct GmresConfig {
  double tol = 1e-7;
  std::size_t max_iters = 200;
  std::optional<std::size_t> restart;  // absent: full GMRES
};

struct SolveStats {
  std::size_t iterations = 0;
  std::vector<double> residual_history;  // starts with the initial residual
  bool converged = false;
};

struct GmresResult {
  Vector x;
  SolveStats stats;
};

namespace detail {

inline Vector apply_prec(const Ilu0Factors* prec, const Vector& v) {
  return prec ? ilu0_solve(*prec, v) : v;
}

// One Arnoldi cycle of right-preconditioned GMRES starting from x. Appends the
// per-iteration residual estimates to history and returns the updated iterate.
struct CycleOutcome {
  Vector x;
  double residual = 0.0;
  std::size_t steps = 0;
  bool converged = false;
  bool breakdown = false;
};

inline CycleOutcome gmres_cycle(const SparseCsrMatrix& a, const Ilu0Factors* prec,
                                const Vector& b, const Vector& x, std::size_t max_steps,
                                double tol_abs, std::vector<double>& history) {
  const std::size_t n = a.n_rows;
  CycleOutcome out;
  out.x = x;

  Vector r0 = subtract(b, spmv(a, x));
  const double beta = norm2(r0);
  out.residual = beta;
  if (beta <= tol_abs || max_steps == 0) {
    out.converged = beta <= tol_abs;
    return out;
  }

  DenseMatrix basis(n, max_steps + 1);
  DenseMatrix hess(max_steps + 1, max_steps);
  Vector cs(max_steps, 0.0), sn(max_steps, 0.0), g(max_steps + 1, 0.0);

  scale(r0, 1.0 / beta);
  basis.set_column(0, r0);
  g[0] = beta;

  std::size_t k = 0;
  for (std::size_t j = 0; j < max_steps; ++j) {
    Vector w = spmv(a, apply_prec(prec, basis.column(j)));

    // Modified Gram-Schmidt with one reorthogonalization pass.
    for (std::size_t i = 0; i <= j; ++i) {
      const double* vi = basis.col(i);
      double h = 0.0;
      for (std::size_t q = 0; q < n; ++q) h += vi[q] * w[q];
      for (std::size_t q = 0; q < n; ++q) w[q] -= h * vi[q];
      hess(i, j) = h;
    }
    for (std::size_t i = 0; i <= j; ++i) {
      const double* vi = basis.col(i);
      double c = 0.0;
      for (std::size_t q = 0; q < n; ++q) c += vi[q] * w[q];
      for (std::size_t q = 0; q < n; ++q) w[q] -= c * vi[q];
      hess(i, j) += c;
    }

    const double h_next = norm2(w);
    hess(j + 1, j) = h_next;
    const bool happy = (h_next == 0.0);
    if (!happy) {
      scale(w, 1.0 / h_next);
      basis.set_column(j + 1, w);
    }

    for (std::size_t i = 0; i < j; ++i) {
      const double t1 = cs[i] * hess(i, j) + sn[i] * hess(i + 1, j);
      const double t2 = -sn[i] * hess(i, j) + cs[i] * hess(i + 1, j);
      hess(i, j) = t1;
      hess(i + 1, j) = t2;
    }
    const double denom = std::hypot(hess(j, j), hess(j + 1, j));
    if (denom > 0.0) {
      cs[j] = hess(j, j) / denom;
      sn[j] = hess(j + 1, j) / denom;
    } else {
      cs[j] = 1.0;
      sn[j] = 0.0;
    }
    hess(j, j) = cs[j] * hess(j, j) + sn[j] * hess(j + 1, j);
    hess(j + 1, j) = 0.0;
    g[j + 1] = -sn[j] * g[j];
    g[j] = cs[j] * g[j];

    k = j + 1;
    out.residual = std::abs(g[j + 1]);
    history.push_back(out.residual);
    if (out.residual <= tol_abs || happy) {
      out.converged = out.residual <= tol_abs || happy;
      out.breakdown = happy;
      break;
    }
  }
  out.steps = k;

  Vector y(k, 0.0);
  for (std::size_t i = k; i-- > 0;) {
    double s = g[i];
    for (std::size_t j = i + 1; j < k; ++j) s -= hess(i, j) * y[j];
    y[i] = hess(i, i) != 0.0 ? s / hess(i, i) : 0.0;
  }
  Vector u(n, 0.0);
  for (std::size_t j = 0; j < k; ++j) axpy(y[j], basis.column(j), u);
  axpy(1.0, apply_prec(prec, u), out.x);
  return out;
}

}  // namespace detail

/// Right-preconditioned GMRES with modified Gram-Schmidt Arnoldi (plus one
/// reorthogonalization pass). Works on the residual equation A d = b - A x0
/// and returns x0 + d. Convergence uses the computable least-squares residual
/// norm relative to ||b||; with right preconditioning this coincides with the
/// true residual of the original system in exact arithmetic. Zero iterations
/// are reported when the initial guess already satisfies the criterion. On
/// stagnation at max_iters the iterate with the smallest observed residual is
/// returned with converged = false.
inline GmresResult gmres(const SparseCsrMatrix& a, const Ilu0Factors* prec, const Vector& b,
                         const Vector& x0, const GmresConfig& cfg) {
  if (a.n_rows != a.n_cols) throw std::invalid_argument("gmres: matrix must be square");
  if (b.size() != a.n_rows || x0.size() != a.n_rows)
    throw std::invalid_argument("gmres: dimension mismatch");
  if (cfg.tol <= 0.0) throw std::invalid_argument("gmres: tol must be positive");
  if (cfg.max_iters < 1) throw std::invalid_argument("gmres: max_iters must be >= 1");
  if (cfg.restart && *cfg.restart < 1) throw std::invalid_argument("gmres: restart must be >= 1");

  const double bnorm = norm2(b);
  const double reference = bnorm > 0.0 ? bnorm : 1.0;
  const double tol_abs = cfg.tol * reference;

  GmresResult res;
  res.x = x0;

  const double r0 = norm2(subtract(b, spmv(a, x0)));
  res.stats.residual_history.push_back(r0);
  if (r0 <= tol_abs) {
    res.stats.converged = true;
    return res;
  }

  Vector best_x = x0;
  double best_res = r0;

  std::size_t done = 0;
  while (done < cfg.max_iters) {
    const std::size_t cycle_len =
        cfg.restart ? std::min(*cfg.restart, cfg.max_iters - done) : cfg.max_iters - done;
    const auto cyc = detail::gmres_cycle(a, prec, b, res.x, cycle_len, tol_abs,
                                         res.stats.residual_history);
    done += cyc.steps;
    res.x = cyc.x;
    if (cyc.residual < best_res) {
      best_res = cyc.residual;
      best_x = res.x;
    }
    if (cyc.converged) {
      res.stats.converged = true;
      break;
    }
    if (cyc.steps == 0) break;  // no progress possible
  }
  res.stats.iterations = done;
  if (!res.stats.converged) res.x = best_x;
  return res;
}

}  // namespace warmstart
