#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "warmstart/vector.hpp"

namespace warmstart {

/// Compressed sparse row matrix. Column indices are strictly increasing
/// within each row; row_offsets has n_rows+1 entries with row_offsets[0] = 0.
struct SparseCsrMatrix {
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::vector<std::size_t> row_offsets;
  std::vector<std::size_t> col_indices;
  std::vector<double> values;

  std::size_t nnz() const { return values.size(); }
};

inline void validate(const SparseCsrMatrix& a) {
  if (a.row_offsets.size() != a.n_rows + 1)
    throw std::invalid_argument("csr: row_offsets must have n_rows+1 entries");
  if (a.row_offsets.front() != 0)
    throw std::invalid_argument("csr: row_offsets[0] must be 0");
  if (a.row_offsets.back() != a.values.size() || a.values.size() != a.col_indices.size())
    throw std::invalid_argument("csr: nnz bookkeeping mismatch");
  for (std::size_t i = 0; i < a.n_rows; ++i) {
    if (a.row_offsets[i] > a.row_offsets[i + 1])
      throw std::invalid_argument("csr: row_offsets must be nondecreasing");
    for (std::size_t k = a.row_offsets[i]; k + 1 < a.row_offsets[i + 1]; ++k)
      if (a.col_indices[k] >= a.col_indices[k + 1])
        throw std::invalid_argument("csr: column indices must be strictly increasing in row " +
                                    std::to_string(i));
    for (std::size_t k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k)
      if (a.col_indices[k] >= a.n_cols)
        throw std::invalid_argument("csr: column index out of range in row " + std::to_string(i));
  }
}

inline Vector spmv(const SparseCsrMatrix& a, const Vector& v) {
  if (v.size() != a.n_cols) throw std::invalid_argument("spmv: dimension mismatch");
  Vector y(a.n_rows, 0.0);
  for (std::size_t i = 0; i < a.n_rows; ++i) {
    double s = 0.0;
    for (std::size_t k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k)
      s += a.values[k] * v[a.col_indices[k]];
    y[i] = s;
  }
  return y;
}

inline double frobenius_norm(const SparseCsrMatrix& a) {
  double s = 0.0;
  for (double e : a.values) s += e * e;
  return std::sqrt(s);
}

}  // namespace warmstart
