#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "warmstart/sparse.hpp"
#include "warmstart/vector.hpp"

namespace warmstart {

class ZeroPivotError : public std::runtime_error {
 public:
  explicit ZeroPivotError(std::size_t row)
      : std::runtime_error("ilu0: zero pivot in row " + std::to_string(row)), row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

/// No-fill incomplete LU factors. The combined sparsity pattern equals the
/// pattern of the factored matrix; L carries an implicit unit diagonal.
struct Ilu0Factors {
  SparseCsrMatrix lower;  // strictly lower triangular part of L
  SparseCsrMatrix upper;  // upper triangular part including the diagonal
};

/// ILU(0), IKJ variant: eliminate row by row, keeping only entries inside the
/// original sparsity pattern. Requires a square matrix with a structurally
/// nonzero diagonal.
inline Ilu0Factors ilu0_factor(const SparseCsrMatrix& a) {
  if (a.n_rows != a.n_cols) throw std::invalid_argument("ilu0: matrix must be square");
  const std::size_t n = a.n_rows;

  std::vector<double> vals = a.values;
  std::vector<std::size_t> diag(n);
  for (std::size_t i = 0; i < n; ++i) {
    bool found = false;
    for (std::size_t k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k)
      if (a.col_indices[k] == i) {
        diag[i] = k;
        found = true;
        break;
      }
    if (!found)
      throw std::invalid_argument("ilu0: structurally zero diagonal in row " + std::to_string(i));
  }

  // pos[col] = index of (i, col) within the current row, or npos.
  constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::vector<std::size_t> pos(n, npos);

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t row_begin = a.row_offsets[i];
    const std::size_t row_end = a.row_offsets[i + 1];
    for (std::size_t k = row_begin; k < row_end; ++k) pos[a.col_indices[k]] = k;

    for (std::size_t k = row_begin; k < row_end && a.col_indices[k] < i; ++k) {
      const std::size_t p = a.col_indices[k];
      const double pivot = vals[diag[p]];
      if (pivot == 0.0) {
        for (std::size_t q = row_begin; q < row_end; ++q) pos[a.col_indices[q]] = npos;
        throw ZeroPivotError(p);
      }
      const double lip = vals[k] / pivot;
      vals[k] = lip;
      for (std::size_t q = diag[p] + 1; q < a.row_offsets[p + 1]; ++q) {
        const std::size_t j = a.col_indices[q];
        const std::size_t target = pos[j];
        if (target != npos) vals[target] -= lip * vals[q];
      }
    }
    if (vals[diag[i]] == 0.0) {
      for (std::size_t k = row_begin; k < row_end; ++k) pos[a.col_indices[k]] = npos;
      throw ZeroPivotError(i);
    }
    for (std::size_t k = row_begin; k < row_end; ++k) pos[a.col_indices[k]] = npos;
  }

  Ilu0Factors f;
  f.lower.n_rows = f.lower.n_cols = n;
  f.upper.n_rows = f.upper.n_cols = n;
  f.lower.row_offsets.assign(1, 0);
  f.upper.row_offsets.assign(1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) {
      const std::size_t j = a.col_indices[k];
      if (j < i) {
        f.lower.col_indices.push_back(j);
        f.lower.values.push_back(vals[k]);
      } else {
        f.upper.col_indices.push_back(j);
        f.upper.values.push_back(vals[k]);
      }
    }
    f.lower.row_offsets.push_back(f.lower.col_indices.size());
    f.upper.row_offsets.push_back(f.upper.col_indices.size());
  }
  return f;
}

/// Applies (LU)^{-1} via two triangular solves.
inline Vector ilu0_solve(const Ilu0Factors& f, const Vector& rhs) {
  const std::size_t n = f.lower.n_rows;
  if (rhs.size() != n) throw std::invalid_argument("ilu0_solve: dimension mismatch");

  Vector z(rhs);
  for (std::size_t i = 0; i < n; ++i) {
    double s = z[i];
    for (std::size_t k = f.lower.row_offsets[i]; k < f.lower.row_offsets[i + 1]; ++k)
      s -= f.lower.values[k] * z[f.lower.col_indices[k]];
    z[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = z[i];
    double d = 0.0;
    for (std::size_t k = f.upper.row_offsets[i]; k < f.upper.row_offsets[i + 1]; ++k) {
      const std::size_t j = f.upper.col_indices[k];
      if (j == i)
        d = f.upper.values[k];
      else
        s -= f.upper.values[k] * z[j];
    }
    z[i] = s / d;
  }
  return z;
}

}  // namespace warmstart
