#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"
#include "warmstart/gmres.hpp"
#include "warmstart/ilu.hpp"
#include "warmstart/sparse.hpp"
#include "warmstart/testcase.hpp"

using namespace warmstart;
namespace ts = testsupport;

namespace {

// 2D five-point Laplacian on a side x side interior grid.
SparseCsrMatrix laplacian2d(std::size_t side) {
  const std::size_t n = side * side;
  ts::Dense d(n, std::vector<double>(n, 0.0));
  for (std::size_t iy = 0; iy < side; ++iy)
    for (std::size_t ix = 0; ix < side; ++ix) {
      const std::size_t r = iy * side + ix;
      d[r][r] = 4.0;
      if (ix > 0) d[r][r - 1] = -1.0;
      if (ix + 1 < side) d[r][r + 1] = -1.0;
      if (iy > 0) d[r][r - side] = -1.0;
      if (iy + 1 < side) d[r][r + side] = -1.0;
    }
  return ts::csr_from_dense(d);
}

}  // namespace

TEST(Ilu0, DiagonalMatrix) {
  ts::Dense d = {{2.0, 0.0, 0.0}, {0.0, -3.0, 0.0}, {0.0, 0.0, 5.0}};
  const SparseCsrMatrix a = ts::csr_from_dense(d);
  const Ilu0Factors f = ilu0_factor(a);
  EXPECT_EQ(f.lower.nnz(), 0u);
  ASSERT_EQ(f.upper.nnz(), 3u);
  EXPECT_DOUBLE_EQ(f.upper.values[0], 2.0);
  EXPECT_DOUBLE_EQ(f.upper.values[1], -3.0);
  EXPECT_DOUBLE_EQ(f.upper.values[2], 5.0);
}

TEST(Ilu0, LowerTriangularInput) {
  ts::Dense d = {{2.0, 0.0, 0.0}, {4.0, 3.0, 0.0}, {-2.0, 6.0, 5.0}};
  const SparseCsrMatrix a = ts::csr_from_dense(d);
  const Ilu0Factors f = ilu0_factor(a);
  // U = diag(A), L = A * diag(A)^{-1}.
  const ts::Dense lower = ts::dense_from_csr(f.lower);
  EXPECT_NEAR(lower[1][0], 4.0 / 2.0, 1e-15);
  EXPECT_NEAR(lower[2][0], -2.0 / 2.0, 1e-15);
  EXPECT_NEAR(lower[2][1], 6.0 / 3.0, 1e-15);
  const ts::Dense upper = ts::dense_from_csr(f.upper);
  EXPECT_NEAR(upper[0][0], 2.0, 1e-15);
  EXPECT_NEAR(upper[1][1], 3.0, 1e-15);
  EXPECT_NEAR(upper[2][2], 5.0, 1e-15);
}

TEST(Ilu0, TridiagonalMatchesDenseLu) {
  // No fill occurs for a tridiagonal matrix, so ILU(0) equals the exact LU.
  ts::Dense d(5, std::vector<double>(5, 0.0));
  for (std::size_t i = 0; i < 5; ++i) {
    d[i][i] = 2.0;
    if (i > 0) d[i][i - 1] = -1.0;
    if (i + 1 < 5) d[i][i + 1] = -1.0;
  }
  const SparseCsrMatrix a = ts::csr_from_dense(d);
  const Ilu0Factors f = ilu0_factor(a);
  const ts::Dense lu = ts::dense_lu_nopivot(d);

  const ts::Dense lower = ts::dense_from_csr(f.lower);
  const ts::Dense upper = ts::dense_from_csr(f.upper);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) {
      if (j < i) EXPECT_NEAR(lower[i][j], lu[i][j], 1e-14);
      if (j >= i) EXPECT_NEAR(upper[i][j], lu[i][j], 1e-14);
    }
}

TEST(Ilu0, PatternIsPreserved) {
  std::mt19937_64 rng(71);
  const SparseCsrMatrix a = ts::random_sparse_system(40, 4, rng);
  const Ilu0Factors f = ilu0_factor(a);
  EXPECT_EQ(f.lower.nnz() + f.upper.nnz(), a.nnz());
  const ts::Dense da = ts::dense_from_csr(a);
  const ts::Dense dl = ts::dense_from_csr(f.lower);
  const ts::Dense du = ts::dense_from_csr(f.upper);
  for (std::size_t i = 0; i < 40; ++i)
    for (std::size_t j = 0; j < 40; ++j)
      if (da[i][j] == 0.0) {
        EXPECT_EQ(dl[i][j], 0.0);
        EXPECT_EQ(du[i][j], 0.0);
      }
}

TEST(Ilu0, ReportsZeroPivotRow) {
  // Structurally present zero on the diagonal of row 0.
  SparseCsrMatrix a;
  a.n_rows = a.n_cols = 2;
  a.row_offsets = {0, 2, 4};
  a.col_indices = {0, 1, 0, 1};
  a.values = {0.0, 1.0, 1.0, 1.0};
  try {
    ilu0_factor(a);
    FAIL() << "expected ZeroPivotError";
  } catch (const ZeroPivotError& e) {
    EXPECT_EQ(e.row(), 0u);
  }
}

TEST(Ilu0, ReportsPivotLostDuringElimination) {
  // Row 1 eliminates to a zero pivot: u11 = 1 - 1 * 1.
  ts::Dense d = {{1.0, 1.0}, {1.0, 1.0}};
  const SparseCsrMatrix a = ts::csr_from_dense(d);
  try {
    ilu0_factor(a);
    FAIL() << "expected ZeroPivotError";
  } catch (const ZeroPivotError& e) {
    EXPECT_EQ(e.row(), 1u);
  }
}

TEST(Ilu0, RejectsMissingDiagonal) {
  SparseCsrMatrix a;
  a.n_rows = a.n_cols = 2;
  a.row_offsets = {0, 1, 2};
  a.col_indices = {1, 0};
  a.values = {1.0, 1.0};
  EXPECT_THROW(ilu0_factor(a), std::invalid_argument);
}

TEST(Gmres, ExactInitialGuessTakesZeroIterations) {
  std::mt19937_64 rng(5);
  const SparseCsrMatrix a = ts::random_sparse_system(30, 3, rng);
  const Vector x_true = ts::random_vector(30, rng);
  const Vector b = spmv(a, x_true);
  const GmresResult r = gmres(a, nullptr, b, x_true, {1e-8, 100, {}});
  EXPECT_EQ(r.stats.iterations, 0u);
  EXPECT_TRUE(r.stats.converged);
  EXPECT_EQ(r.x, x_true);
}

TEST(Gmres, IdentityConvergesInOneIteration) {
  SparseCsrMatrix eye;
  eye.n_rows = eye.n_cols = 5;
  eye.row_offsets = {0, 1, 2, 3, 4, 5};
  eye.col_indices = {0, 1, 2, 3, 4};
  eye.values.assign(5, 1.0);
  std::mt19937_64 rng(6);
  const Vector b = ts::random_vector(5, rng);
  const GmresResult r = gmres(eye, nullptr, b, Vector(5, 0.0), {1e-12, 10, {}});
  EXPECT_EQ(r.stats.iterations, 1u);
  EXPECT_TRUE(r.stats.converged);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(r.x[i], b[i], 1e-12);
}

TEST(Gmres, LaplacianAgainstDenseSolve) {
  const SparseCsrMatrix a = laplacian2d(10);  // n = 100
  std::mt19937_64 rng(13);
  const Vector b = ts::random_vector(100, rng);
  const double tol = 1e-7;
  const GmresResult r = gmres(a, nullptr, b, Vector(100, 0.0), {tol, 200, {}});
  EXPECT_TRUE(r.stats.converged);
  ASSERT_FALSE(r.stats.residual_history.empty());
  EXPECT_DOUBLE_EQ(r.stats.residual_history[0], norm2(b));  // residual of the supplied guess
  EXPECT_EQ(r.stats.residual_history.size(), r.stats.iterations + 1);
  EXPECT_LE(norm2(subtract(b, spmv(a, r.x))), 1.1 * tol * norm2(b));

  const std::vector<double> x_star = ts::dense_lu_solve(ts::dense_from_csr(a), b);
  Vector xs(x_star.begin(), x_star.end());
  EXPECT_LE(norm2(subtract(r.x, xs)) / norm2(xs), 1e-5);
}

TEST(Gmres, ResidualHistoryMonotoneForFullGmres) {
  std::mt19937_64 rng(29);
  const SparseCsrMatrix a = ts::random_sparse_system(60, 4, rng);
  const Vector b = ts::random_vector(60, rng);
  const GmresResult r = gmres(a, nullptr, b, Vector(60, 0.0), {1e-10, 100, {}});
  for (std::size_t k = 1; k < r.stats.residual_history.size(); ++k)
    EXPECT_LE(r.stats.residual_history[k], r.stats.residual_history[k - 1] * (1.0 + 1e-14));
}

TEST(Gmres, SolvesResidualEquationShiftedByGuess) {
  std::mt19937_64 rng(31);
  const SparseCsrMatrix a = ts::random_sparse_system(40, 3, rng);
  const Vector b = ts::random_vector(40, rng);
  const Vector x0 = ts::random_vector(40, rng);
  const GmresConfig cfg{1e-9, 80, {}};

  const GmresResult with_guess = gmres(a, nullptr, b, x0, cfg);
  const Vector shifted_rhs = subtract(b, spmv(a, x0));
  const GmresResult from_zero = gmres(a, nullptr, shifted_rhs, Vector(40, 0.0), cfg);

  // Identical arithmetic path: x = x0 + d where d solves A d = b - A x0.
  ASSERT_EQ(with_guess.x.size(), from_zero.x.size());
  for (std::size_t i = 0; i < 40; ++i) EXPECT_EQ(with_guess.x[i], x0[i] + from_zero.x[i]);
}

TEST(Gmres, IluPreconditioningReducesIterations) {
  const Grid2d grid{30, 30};
  const auto [a, b] = assemble(grid, 2.3);
  const GmresConfig cfg{1e-7, 500, {}};
  const GmresResult plain = gmres(a, nullptr, b, Vector(b.size(), 0.0), cfg);
  const Ilu0Factors prec = ilu0_factor(a);
  const GmresResult precond = gmres(a, &prec, b, Vector(b.size(), 0.0), cfg);
  EXPECT_TRUE(precond.stats.converged);
  EXPECT_LT(precond.stats.iterations, plain.stats.iterations);
}

TEST(Gmres, MatchesConjugateGradientOnSpd) {
  const SparseCsrMatrix a = laplacian2d(8);
  std::mt19937_64 rng(37);
  const Vector b = ts::random_vector(64, rng);
  const double tol = 1e-10;
  const GmresResult r = gmres(a, nullptr, b, Vector(64, 0.0), {tol, 200, {}});
  const std::vector<double> cg = ts::cg_solve(a, b, 1e-13, 1000);
  Vector xc(cg.begin(), cg.end());
  EXPECT_LE(norm2(subtract(r.x, xc)) / norm2(xc), 10.0 * tol);
}

TEST(Gmres, StagnationReturnsBestIterate) {
  std::mt19937_64 rng(41);
  const SparseCsrMatrix a = ts::random_sparse_system(50, 4, rng);
  const Vector b = ts::random_vector(50, rng);
  const GmresResult r = gmres(a, nullptr, b, Vector(50, 0.0), {1e-14, 5, {}});
  EXPECT_FALSE(r.stats.converged);
  EXPECT_EQ(r.stats.iterations, 5u);
  // The returned iterate must beat the starting residual.
  EXPECT_LT(norm2(subtract(b, spmv(a, r.x))), norm2(b));
}

TEST(Gmres, ZeroRhsFromZeroGuessIsImmediate) {
  std::mt19937_64 rng(47);
  const SparseCsrMatrix a = ts::random_sparse_system(20, 3, rng);
  const GmresResult r = gmres(a, nullptr, Vector(20, 0.0), Vector(20, 0.0), {1e-10, 50, {}});
  EXPECT_TRUE(r.stats.converged);
  EXPECT_EQ(r.stats.iterations, 0u);
  for (double e : r.x) EXPECT_EQ(e, 0.0);
}

TEST(Gmres, RestartedVariantConverges) {
  const SparseCsrMatrix a = laplacian2d(8);
  std::mt19937_64 rng(43);
  const Vector b = ts::random_vector(64, rng);
  GmresConfig cfg{1e-9, 400, {}};
  cfg.restart = 20;
  const GmresResult r = gmres(a, nullptr, b, Vector(64, 0.0), cfg);
  EXPECT_TRUE(r.stats.converged);
  EXPECT_LE(norm2(subtract(b, spmv(a, r.x))), 1.1e-9 * norm2(b));
}
