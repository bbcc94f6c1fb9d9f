#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "warmstart/sparse.hpp"
#include "warmstart/vector.hpp"

namespace warmstart {

/// Uniform grid on the unit square; only interior points are unknowns and
/// they are ordered row-major with x varying fastest.
struct Grid2d {
  std::size_t nx = 0;
  std::size_t ny = 0;

  double hx() const { return 1.0 / static_cast<double>(nx + 1); }
  double hy() const { return 1.0 / static_cast<double>(ny + 1); }
  std::size_t n_unknowns() const { return nx * ny; }

  // ix in 0..nx+1 / iy in 0..ny+1, boundary included.
  double x(std::size_t ix) const { return static_cast<double>(ix) * hx(); }
  double y(std::size_t iy) const { return static_cast<double>(iy) * hy(); }

  // Interior indices run 1..nx and 1..ny.
  std::size_t index(std::size_t ix, std::size_t iy) const { return (iy - 1) * nx + (ix - 1); }
};

struct TimeGrid {
  double t0 = 2.3;
  double dt = 1e-3;
  std::size_t nt = 200;
};

inline double coefficient_a(double x, double y, double t) {
  return std::exp(-(x - 0.5) * (x - 0.5) - (y - 0.5) * (y - 0.5)) * std::cos(t * x) + 2.1;
}

inline double coefficient_a_dx(double x, double y, double t) {
  const double bump = std::exp(-(x - 0.5) * (x - 0.5) - (y - 0.5) * (y - 0.5));
  return bump * (-2.0 * (x - 0.5) * std::cos(t * x) - t * std::sin(t * x));
}

inline double coefficient_a_dy(double x, double y, double t) {
  const double bump = std::exp(-(x - 0.5) * (x - 0.5) - (y - 0.5) * (y - 0.5));
  return -2.0 * (y - 0.5) * bump * std::cos(t * x);
}

inline double exact_f(double x, double y, double t) {
  const double pi = 3.141592653589793238462643383279503;
  const double sy = std::sin(4.0 * pi * y * t);
  const double sx = std::sin(15.0 * pi * x * t);
  const double cy = std::cos(3.0 * pi * y * t);
  const double bump = std::exp((x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5) - 0.0625);
  return sy * sx * (1.0 + sx * cy * bump);
}

namespace detail {

// Value with first and second partials in x and y; the mixed partial is never
// needed for div(a grad f).
struct Jet2 {
  double v = 0.0, dx = 0.0, dy = 0.0, dxx = 0.0, dyy = 0.0;
};

inline Jet2 operator*(const Jet2& f, const Jet2& g) {
  Jet2 r;
  r.v = f.v * g.v;
  r.dx = f.dx * g.v + f.v * g.dx;
  r.dy = f.dy * g.v + f.v * g.dy;
  r.dxx = f.dxx * g.v + 2.0 * f.dx * g.dx + f.v * g.dxx;
  r.dyy = f.dyy * g.v + 2.0 * f.dy * g.dy + f.v * g.dyy;
  return r;
}

inline Jet2 operator+(const Jet2& f, const Jet2& g) {
  return {f.v + g.v, f.dx + g.dx, f.dy + g.dy, f.dxx + g.dxx, f.dyy + g.dyy};
}

inline Jet2 constant(double c) { return {c, 0.0, 0.0, 0.0, 0.0}; }

inline Jet2 sin_in_x(double freq, double x) {
  const double s = std::sin(freq * x);
  const double c = std::cos(freq * x);
  return {s, freq * c, 0.0, -freq * freq * s, 0.0};
}

inline Jet2 sin_in_y(double freq, double y) {
  const double s = std::sin(freq * y);
  const double c = std::cos(freq * y);
  return {s, 0.0, freq * c, 0.0, -freq * freq * s};
}

inline Jet2 cos_in_y(double freq, double y) {
  const double s = std::sin(freq * y);
  const double c = std::cos(freq * y);
  return {c, 0.0, -freq * s, 0.0, -freq * freq * c};
}

inline Jet2 radial_bump(double x, double y) {
  const double e = std::exp((x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5) - 0.0625);
  Jet2 r;
  r.v = e;
  r.dx = 2.0 * (x - 0.5) * e;
  r.dy = 2.0 * (y - 0.5) * e;
  r.dxx = (2.0 + 4.0 * (x - 0.5) * (x - 0.5)) * e;
  r.dyy = (2.0 + 4.0 * (y - 0.5) * (y - 0.5)) * e;
  return r;
}

inline Jet2 exact_f_jet(double x, double y, double t) {
  const double pi = 3.141592653589793238462643383279503;
  const Jet2 sy = sin_in_y(4.0 * pi * t, y);
  const Jet2 sx = sin_in_x(15.0 * pi * t, x);
  const Jet2 cy = cos_in_y(3.0 * pi * t, y);
  return sy * sx * (constant(1.0) + sx * cy * radial_bump(x, y));
}

}  // namespace detail

/// Source term for which exact_f solves div(a grad f) = g, expanded through
/// the product rule: g = a (f_xx + f_yy) + a_x f_x + a_y f_y.
inline double source_g(double x, double y, double t) {
  const detail::Jet2 f = detail::exact_f_jet(x, y, t);
  return coefficient_a(x, y, t) * (f.dxx + f.dyy) + coefficient_a_dx(x, y, t) * f.dx +
         coefficient_a_dy(x, y, t) * f.dy;
}

/// Finite-difference weights for derivatives 0..max_order at point z on
/// arbitrarily spaced nodes (Fornberg's recurrence). Column k of the result
/// holds the weights of the kth derivative.
inline std::vector<Vector> fd_weight_table(double z, const Vector& nodes, std::size_t max_order) {
  const std::size_t n = nodes.size();
  if (n == 0 || max_order >= n)
    throw std::invalid_argument("fd_weight_table: need more nodes than the derivative order");

  std::vector<Vector> c(n, Vector(max_order + 1, 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - z;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t mn = std::min(i, max_order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - z;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k)
          c[i][k] = c1 * (static_cast<double>(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (std::size_t k = mn; k >= 1; --k)
        c[j][k] = (c4 * c[j][k] - static_cast<double>(k) * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }

  std::vector<Vector> by_order(max_order + 1, Vector(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k <= max_order; ++k) by_order[k][i] = c[i][k];
  return by_order;
}

inline Vector fd_weights(double z, const Vector& nodes, std::size_t order) {
  return fd_weight_table(z, nodes, order)[order];
}

namespace detail {

// Fourth-order stencil offsets per 1D position: centered five points in the
// interior, six-point shifted stencils for the two points next to each
// boundary.
inline std::vector<long> stencil_offsets(std::size_t i, std::size_t count) {
  if (i == 1) return {-1, 0, 1, 2, 3, 4};
  if (i == 2) return {-2, -1, 0, 1, 2, 3};
  if (i == count) return {-4, -3, -2, -1, 0, 1};
  if (i == count - 1) return {-3, -2, -1, 0, 1, 2};
  return {-2, -1, 0, 1, 2};
}

struct StencilClass {
  std::vector<long> offsets;
  Vector d1;
  Vector d2;
};

inline StencilClass make_stencil_class(std::vector<long> offsets, double h) {
  Vector nodes(offsets.size());
  for (std::size_t k = 0; k < offsets.size(); ++k) nodes[k] = static_cast<double>(offsets[k]) * h;
  auto table = fd_weight_table(0.0, nodes, 2);
  return {std::move(offsets), std::move(table[1]), std::move(table[2])};
}

// One class per distinct offset pattern, indexed by 1D position.
inline std::vector<StencilClass> build_classes(std::size_t count, double h) {
  std::vector<StencilClass> classes;
  classes.push_back(make_stencil_class(stencil_offsets(1, count), h));
  classes.push_back(make_stencil_class(stencil_offsets(2, count), h));
  classes.push_back(make_stencil_class({-2, -1, 0, 1, 2}, h));
  classes.push_back(make_stencil_class(stencil_offsets(count - 1, count), h));
  classes.push_back(make_stencil_class(stencil_offsets(count, count), h));
  return classes;
}

inline const StencilClass& pick_class(const std::vector<StencilClass>& classes, std::size_t i,
                                      std::size_t count) {
  if (i == 1) return classes[0];
  if (i == 2) return classes[1];
  if (i == count) return classes[4];
  if (i == count - 1) return classes[3];
  return classes[2];
}

}  // namespace detail

using CoefficientFn = std::function<double(double, double)>;

/// Discretization of div(a grad f) = a (f_xx + f_yy) + a_x f_x + a_y f_y on
/// the interior unknowns, with homogeneous Dirichlet rows eliminated. When
/// boundary_values is supplied, the stencil contributions of boundary nodes
/// are accumulated into *lift instead of being dropped, so the caller can
/// build right-hand sides for inhomogeneous boundary data.
inline SparseCsrMatrix assemble_operator(const Grid2d& g, const CoefficientFn& a,
                                         const CoefficientFn& a_dx, const CoefficientFn& a_dy,
                                         const CoefficientFn* boundary_values = nullptr,
                                         Vector* lift = nullptr) {
  if (g.nx < 5 || g.ny < 5)
    throw std::invalid_argument("assemble: grid too small for the fourth-order stencil");

  const std::size_t n = g.n_unknowns();
  const auto x_classes = detail::build_classes(g.nx, g.hx());
  const auto y_classes = detail::build_classes(g.ny, g.hy());

  SparseCsrMatrix mat;
  mat.n_rows = mat.n_cols = n;
  mat.row_offsets.reserve(n + 1);
  mat.row_offsets.push_back(0);
  mat.col_indices.reserve(n * 11);
  mat.values.reserve(n * 11);
  if (lift) lift->assign(n, 0.0);

  std::vector<std::pair<std::size_t, double>> row;
  row.reserve(12);

  for (std::size_t iy = 1; iy <= g.ny; ++iy) {
    for (std::size_t ix = 1; ix <= g.nx; ++ix) {
      const double px = g.x(ix);
      const double py = g.y(iy);
      const double av = a(px, py);
      const double ax = a_dx(px, py);
      const double ay = a_dy(px, py);
      const std::size_t r = g.index(ix, iy);
      row.clear();

      const auto& sx = detail::pick_class(x_classes, ix, g.nx);
      for (std::size_t k = 0; k < sx.offsets.size(); ++k) {
        const long gx = static_cast<long>(ix) + sx.offsets[k];
        const double coeff = av * sx.d2[k] + ax * sx.d1[k];
        if (gx >= 1 && gx <= static_cast<long>(g.nx)) {
          row.emplace_back(g.index(static_cast<std::size_t>(gx), iy), coeff);
        } else if (boundary_values && lift) {
          (*lift)[r] += coeff * (*boundary_values)(g.x(static_cast<std::size_t>(gx)), py);
        }
      }
      const auto& sy = detail::pick_class(y_classes, iy, g.ny);
      for (std::size_t k = 0; k < sy.offsets.size(); ++k) {
        const long gy = static_cast<long>(iy) + sy.offsets[k];
        const double coeff = av * sy.d2[k] + ay * sy.d1[k];
        if (gy >= 1 && gy <= static_cast<long>(g.ny)) {
          row.emplace_back(g.index(ix, static_cast<std::size_t>(gy)), coeff);
        } else if (boundary_values && lift) {
          (*lift)[r] += coeff * (*boundary_values)(px, g.y(static_cast<std::size_t>(gy)));
        }
      }

      std::sort(row.begin(), row.end());
      for (std::size_t k = 0; k < row.size(); ++k) {
        if (!mat.col_indices.empty() && mat.col_indices.size() > mat.row_offsets.back() &&
            mat.col_indices.back() == row[k].first) {
          mat.values.back() += row[k].second;  // x- and y-stencil share the center
        } else {
          mat.col_indices.push_back(row[k].first);
          mat.values.push_back(row[k].second);
        }
      }
      mat.row_offsets.push_back(mat.col_indices.size());
    }
  }
  return mat;
}

inline Vector exact_solution_samples(const Grid2d& g, double t) {
  Vector f(g.n_unknowns());
  for (std::size_t iy = 1; iy <= g.ny; ++iy)
    for (std::size_t ix = 1; ix <= g.nx; ++ix) f[g.index(ix, iy)] = exact_f(g.x(ix), g.y(iy), t);
  return f;
}

enum class RhsMode {
  // b = A(t) * samples of the exact solution; the discrete solution is then
  // known to machine precision.
  DiscreteManufactured,
  // b from the analytic source term, with the stencil contributions of the
  // exact boundary trace lifted to the right-hand side; used for the
  // convergence-order study.
  ContinuousSource,
};

inline std::pair<SparseCsrMatrix, Vector> assemble(const Grid2d& g, double t,
                                                   RhsMode mode = RhsMode::DiscreteManufactured) {
  const CoefficientFn av = [t](double x, double y) { return coefficient_a(x, y, t); };
  const CoefficientFn ax = [t](double x, double y) { return coefficient_a_dx(x, y, t); };
  const CoefficientFn ay = [t](double x, double y) { return coefficient_a_dy(x, y, t); };

  if (mode == RhsMode::DiscreteManufactured) {
    SparseCsrMatrix a = assemble_operator(g, av, ax, ay);
    Vector b = spmv(a, exact_solution_samples(g, t));
    return {std::move(a), std::move(b)};
  }

  const CoefficientFn trace = [t](double x, double y) { return exact_f(x, y, t); };
  Vector lift;
  SparseCsrMatrix a = assemble_operator(g, av, ax, ay, &trace, &lift);
  Vector b(g.n_unknowns());
  for (std::size_t iy = 1; iy <= g.ny; ++iy)
    for (std::size_t ix = 1; ix <= g.nx; ++ix) {
      const std::size_t r = g.index(ix, iy);
      b[r] = source_g(g.x(ix), g.y(iy), t) - lift[r];
    }
  return {std::move(a), std::move(b)};
}

/// Lazily assembled sequence of systems at t_i = t0 + i dt.
class SystemSequence {
 public:
  SystemSequence(Grid2d grid, TimeGrid time, RhsMode mode = RhsMode::DiscreteManufactured)
      : grid_(grid), time_(time), mode_(mode) {}

  std::size_t size() const { return time_.nt; }
  double time_at(std::size_t i) const { return time_.t0 + static_cast<double>(i) * time_.dt; }
  const Grid2d& grid() const { return grid_; }

  std::pair<SparseCsrMatrix, Vector> assemble_step(std::size_t i) const {
    if (i >= time_.nt) throw std::out_of_range("SystemSequence: step out of range");
    return assemble(grid_, time_at(i), mode_);
  }

 private:
  Grid2d grid_;
  TimeGrid time_;
  RhsMode mode_;
};

}  // namespace warmstart
