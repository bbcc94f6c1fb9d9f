#pragma once

#include <cstddef>
#include <random>
#include <stdexcept>
#include <utility>

#include "warmstart/dense.hpp"
#include "warmstart/history.hpp"
#include "warmstart/qr.hpp"
#include "warmstart/vector.hpp"

namespace warmstart {

/// Sketch of the history window: sketch = X * gauss, where row k of gauss is
/// the random vector paired with history column k. The generator travels with
/// the state so a run is reproducible from its seed alone.
struct SketchState {
  DenseMatrix gauss;   // M x m
  DenseMatrix sketch;  // n x m
  std::size_t age = 0;
  std::size_t refresh_period = 50;
  std::mt19937_64 rng;
};

/// Builds the sketch for an explicitly supplied coefficient matrix. Test hook
/// and backend of sketch_from_scratch.
inline SketchState sketch_with_z(const HistoryWindow& h, DenseMatrix z,
                                 std::size_t refresh_period, std::mt19937_64 rng) {
  if (!h.full()) throw std::invalid_argument("sketch: history window must be full");
  if (z.rows() != h.capacity()) throw std::invalid_argument("sketch: Z row count must equal M");
  if (z.cols() > h.capacity()) throw std::invalid_argument("sketch: m must not exceed M");
  if (refresh_period == 0) throw std::invalid_argument("sketch: refresh period must be positive");

  SketchState s;
  s.sketch = matmul(h.snapshot(), z);
  s.gauss = std::move(z);
  s.age = 0;
  s.refresh_period = refresh_period;
  s.rng = rng;
  return s;
}

inline SketchState sketch_from_scratch(const HistoryWindow& h, std::size_t m,
                                       std::size_t refresh_period, std::mt19937_64 rng) {
  DenseMatrix z(h.capacity(), m);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < h.capacity(); ++i) z(i, j) = normal(rng);
  return sketch_with_z(h, std::move(z), refresh_period, std::move(rng));
}

/// Removes the contribution of the evicted oldest column and shifts the rows
/// of gauss up by one; the last row is left vacant for sketch_append.
inline void sketch_downdate(SketchState& s, const Vector& evicted) {
  const std::size_t n = s.sketch.rows();
  const std::size_t m = s.sketch.cols();
  if (evicted.size() != n) throw std::invalid_argument("sketch_downdate: dimension mismatch");
  for (std::size_t j = 0; j < m; ++j) {
    const double zj = s.gauss(0, j);
    double* cj = s.sketch.col(j);
    for (std::size_t i = 0; i < n; ++i) cj[i] -= evicted[i] * zj;
  }
  for (std::size_t k = 0; k + 1 < s.gauss.rows(); ++k)
    for (std::size_t j = 0; j < m; ++j) s.gauss(k, j) = s.gauss(k + 1, j);
}

/// Installs z_row as the last row of gauss and adds the contribution of the
/// newest column.
inline void sketch_append(SketchState& s, const Vector& pushed, const Vector& z_row) {
  const std::size_t n = s.sketch.rows();
  const std::size_t m = s.sketch.cols();
  if (pushed.size() != n) throw std::invalid_argument("sketch_append: dimension mismatch");
  if (z_row.size() != m) throw std::invalid_argument("sketch_append: row length mismatch");
  const std::size_t last = s.gauss.rows() - 1;
  for (std::size_t j = 0; j < m; ++j) {
    s.gauss(last, j) = z_row[j];
    double* cj = s.sketch.col(j);
    for (std::size_t i = 0; i < n; ++i) cj[i] += pushed[i] * z_row[j];
  }
}

/// Rank-one sketch update after the window replaced its oldest column with a
/// new one. Every refresh_period-th call rebuilds the sketch from scratch with
/// a freshly drawn gauss matrix to stop cancellation from accumulating.
inline SketchState sketch_progressive_update(SketchState s, const HistoryWindow& h,
                                             const Vector& evicted, const Vector& pushed) {
  if (s.age + 1 >= s.refresh_period)
    return sketch_from_scratch(h, s.sketch.cols(), s.refresh_period, std::move(s.rng));

  sketch_downdate(s, evicted);
  Vector z_row(s.sketch.cols());
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& e : z_row) e = normal(s.rng);
  sketch_append(s, pushed, z_row);
  ++s.age;
  return s;
}

/// Orthonormal basis of the sketch via reduced QR.
inline DenseMatrix basis_from_sketch(const SketchState& s) {
  return qr_reduced(s.sketch).q;
}

}  // namespace warmstart
