#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"
#include "warmstart/dense.hpp"
#include "warmstart/qr.hpp"
#include "warmstart/sparse.hpp"
#include "warmstart/svd.hpp"
#include "warmstart/vector.hpp"

using namespace warmstart;
namespace ts = testsupport;

namespace {

double reconstruction_error(const DenseMatrix& b, const SvdThin& f) {
  DenseMatrix us(f.u.rows(), f.u.cols());
  for (std::size_t j = 0; j < f.u.cols(); ++j)
    for (std::size_t i = 0; i < f.u.rows(); ++i) us(i, j) = f.u(i, j) * f.s[j];
  const DenseMatrix recon = matmul(us, transpose(f.v));
  double err = 0.0;
  for (std::size_t j = 0; j < b.cols(); ++j)
    for (std::size_t i = 0; i < b.rows(); ++i) {
      const double d = b(i, j) - recon(i, j);
      err += d * d;
    }
  return std::sqrt(err);
}

double orthonormality_error(const DenseMatrix& q) {
  double err = 0.0;
  for (std::size_t a = 0; a < q.cols(); ++a)
    for (std::size_t b = 0; b < q.cols(); ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < q.rows(); ++i) s += q(i, a) * q(i, b);
      const double d = s - (a == b ? 1.0 : 0.0);
      err += d * d;
    }
  return std::sqrt(err);
}

}  // namespace

TEST(Spmv, IdentityPassesThrough) {
  SparseCsrMatrix eye;
  eye.n_rows = eye.n_cols = 3;
  eye.row_offsets = {0, 1, 2, 3};
  eye.col_indices = {0, 1, 2};
  eye.values = {1.0, 1.0, 1.0};
  validate(eye);
  const Vector y = spmv(eye, {1.0, 2.0, 3.0});
  EXPECT_EQ(y, (Vector{1.0, 2.0, 3.0}));
}

TEST(Spmv, ZeroMatrixGivesZero) {
  SparseCsrMatrix z;
  z.n_rows = 4;
  z.n_cols = 3;
  z.row_offsets = {0, 0, 0, 0, 0};
  validate(z);
  const Vector y = spmv(z, {5.0, -1.0, 2.0});
  for (double e : y) EXPECT_EQ(e, 0.0);
}

TEST(Spmv, SmallDenseCase) {
  const ts::Dense d = {{2.0, 0.0}, {1.0, 3.0}};
  const SparseCsrMatrix a = ts::csr_from_dense(d);
  const Vector y = spmv(a, {1.0, 1.0});
  EXPECT_DOUBLE_EQ(y[0], 2.0);
  EXPECT_DOUBLE_EQ(y[1], 4.0);
}

TEST(Spmv, MatchesDenseOracleOnRandomMatrices) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  std::bernoulli_distribution keep(0.3);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 5 + static_cast<std::size_t>(trial * 2);
    ts::Dense d(n, std::vector<double>(n, 0.0));
    for (auto& row : d)
      for (double& e : row)
        if (keep(rng)) e = val(rng);
    const SparseCsrMatrix a = ts::csr_from_dense(d);
    const Vector v = ts::random_vector(n, rng);
    const Vector got = spmv(a, v);
    const std::vector<double> want = ts::dense_matvec(d, v);
    for (std::size_t i = 0; i < n; ++i)
      EXPECT_NEAR(got[i], want[i], 1e-13 * (1.0 + std::abs(want[i])));
  }
}

TEST(Spmv, RejectsDimensionMismatch) {
  SparseCsrMatrix eye;
  eye.n_rows = eye.n_cols = 2;
  eye.row_offsets = {0, 1, 2};
  eye.col_indices = {0, 1};
  eye.values = {1.0, 1.0};
  EXPECT_THROW(spmv(eye, {1.0, 2.0, 3.0}), std::invalid_argument);
}

TEST(CsrValidate, RejectsUnsortedColumns) {
  SparseCsrMatrix a;
  a.n_rows = 1;
  a.n_cols = 3;
  a.row_offsets = {0, 2};
  a.col_indices = {2, 0};
  a.values = {1.0, 1.0};
  EXPECT_THROW(validate(a), std::invalid_argument);
}

TEST(QrReduced, OrthonormalInputReproduced) {
  std::mt19937_64 rng(11);
  const DenseMatrix b = ts::random_orthonormal(20, 5, rng);
  const QrFactors f = qr_reduced(b);
  // Q equals B up to column signs; with the nonnegative-diagonal convention
  // and R = I the signs are fixed.
  for (std::size_t j = 0; j < 5; ++j)
    for (std::size_t i = 0; i < 5; ++i)
      EXPECT_NEAR(f.r(i, j), i == j ? 1.0 : 0.0, 1e-12);
  for (std::size_t j = 0; j < 5; ++j)
    for (std::size_t i = 0; i < 20; ++i) EXPECT_NEAR(f.q(i, j), b(i, j), 1e-12);
}

TEST(QrReduced, AnalyticTwoByOne) {
  DenseMatrix b(2, 1);
  b(0, 0) = 3.0;
  b(1, 0) = 4.0;
  const QrFactors f = qr_reduced(b);
  EXPECT_NEAR(f.r(0, 0), 5.0, 1e-14);
  EXPECT_NEAR(f.q(0, 0), 0.6, 1e-14);
  EXPECT_NEAR(f.q(1, 0), 0.8, 1e-14);
}

TEST(QrReduced, RandomTallMatrixFactorizes) {
  std::mt19937_64 rng(3);
  const DenseMatrix b = ts::random_matrix(50, 8, rng);
  const QrFactors f = qr_reduced(b);
  const DenseMatrix recon = matmul(f.q, f.r);
  double err = 0.0;
  for (std::size_t j = 0; j < 8; ++j)
    for (std::size_t i = 0; i < 50; ++i) {
      const double d = b(i, j) - recon(i, j);
      err += d * d;
    }
  EXPECT_LE(std::sqrt(err), 1e-12 * frobenius_norm(b));
  EXPECT_LE(orthonormality_error(f.q), 1e-10);
  for (std::size_t j = 0; j < 8; ++j) {
    EXPECT_GE(f.r(j, j), 0.0);
    for (std::size_t i = j + 1; i < 8; ++i) EXPECT_EQ(f.r(i, j), 0.0);
  }
}

TEST(QrReduced, OrthonormalAcrossConditionNumbers) {
  std::mt19937_64 rng(17);
  for (const double cond : {1.0, 1e4, 1e8}) {
    std::vector<double> sigma(6);
    for (std::size_t k = 0; k < sigma.size(); ++k)
      sigma[k] = std::pow(cond, -static_cast<double>(k) / 5.0);
    const DenseMatrix b = ts::matrix_with_singular_values(40, sigma, rng);
    const QrFactors f = qr_reduced(b);
    EXPECT_LE(orthonormality_error(f.q), 1e-10) << "condition " << cond;
  }
}

TEST(QrReduced, RankDeficientStillSucceeds) {
  std::mt19937_64 rng(5);
  DenseMatrix b(12, 4);
  const Vector base = ts::random_vector(12, rng);
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t i = 0; i < 12; ++i) b(i, j) = base[i] * static_cast<double>(j + 1);
  const QrFactors f = qr_reduced(b);
  EXPECT_LE(orthonormality_error(f.q), 1e-10);
  // All but the first diagonal entry collapse.
  for (std::size_t j = 1; j < 4; ++j) EXPECT_LE(std::abs(f.r(j, j)), 1e-12 * f.r(0, 0));
}

TEST(SvdThin, DiagonalEmbedded) {
  DenseMatrix b(4, 2);
  b(0, 0) = 3.0;
  b(1, 1) = 1.0;
  const SvdThin f = svd_thin(b);
  ASSERT_EQ(f.s.size(), 2u);
  EXPECT_NEAR(f.s[0], 3.0, 1e-14);
  EXPECT_NEAR(f.s[1], 1.0, 1e-14);
  EXPECT_LE(reconstruction_error(b, f), 1e-14);
}

TEST(SvdThin, RankOne) {
  std::mt19937_64 rng(9);
  const Vector u = ts::random_vector(30, rng);
  const Vector v = ts::random_vector(6, rng);
  DenseMatrix b(30, 6);
  for (std::size_t j = 0; j < 6; ++j)
    for (std::size_t i = 0; i < 30; ++i) b(i, j) = u[i] * v[j];
  const SvdThin f = svd_thin(b);
  EXPECT_NEAR(f.s[0], norm2(u) * norm2(v), 1e-12 * f.s[0]);
  for (std::size_t k = 1; k < 6; ++k) EXPECT_LE(f.s[k], 1e-12 * f.s[0]);
  EXPECT_LE(reconstruction_error(b, f), 1e-10 * frobenius_norm(b));
  EXPECT_LE(orthonormality_error(f.u), 1e-10);
}

TEST(SvdThin, MatchesOneSidedJacobiOracle) {
  std::mt19937_64 rng(21);
  const DenseMatrix b = ts::random_matrix(30, 6, rng);
  const SvdThin f = svd_thin(b);

  ts::Dense rowmajor(30, std::vector<double>(6, 0.0));
  for (std::size_t i = 0; i < 30; ++i)
    for (std::size_t j = 0; j < 6; ++j) rowmajor[i][j] = b(i, j);
  const std::vector<double> want = ts::one_sided_jacobi_singular_values(rowmajor);

  for (std::size_t k = 0; k < 6; ++k) EXPECT_NEAR(f.s[k], want[k], 1e-10 * want[0]);
  for (std::size_t k = 1; k < 6; ++k) EXPECT_LE(f.s[k], f.s[k - 1] * (1.0 + 1e-15));
  EXPECT_LE(reconstruction_error(b, f), 1e-10 * frobenius_norm(b));
  EXPECT_LE(orthonormality_error(f.u), 1e-10);
  EXPECT_LE(orthonormality_error(f.v), 1e-10);
}

TEST(SvdThin, SquareRankDeficientWithDenseRange) {
  // Most columns of U come from the orthonormal completion while the range
  // already touches every coordinate.
  std::mt19937_64 rng(77);
  DenseMatrix b(6, 6);
  for (int r = 0; r < 2; ++r) {
    const Vector u = ts::random_vector(6, rng);
    const Vector v = ts::random_vector(6, rng);
    for (std::size_t j = 0; j < 6; ++j)
      for (std::size_t i = 0; i < 6; ++i) b(i, j) += u[i] * v[j];
  }
  const SvdThin f = svd_thin(b);
  for (std::size_t k = 2; k < 6; ++k) EXPECT_LE(f.s[k], 1e-12 * f.s[0]);
  EXPECT_LE(orthonormality_error(f.u), 1e-10);
  EXPECT_LE(orthonormality_error(f.v), 1e-10);
  EXPECT_LE(reconstruction_error(b, f), 1e-10 * frobenius_norm(b));
}

TEST(SvdThin, ZeroMatrixGetsOrthonormalCompletion) {
  const DenseMatrix b(6, 3);
  const SvdThin f = svd_thin(b);
  for (double s : f.s) EXPECT_EQ(s, 0.0);
  EXPECT_LE(orthonormality_error(f.u), 1e-14);
  EXPECT_LE(reconstruction_error(b, f), 1e-300);
}

TEST(SvdThin, SquaredValuesSumToFrobenius) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 10; ++trial) {
    const DenseMatrix b = ts::random_matrix(25 + trial, 7, rng);
    const SvdThin f = svd_thin(b);
    double sum = 0.0;
    for (double s : f.s) sum += s * s;
    const double fro2 = frobenius_norm(b) * frobenius_norm(b);
    EXPECT_NEAR(sum, fro2, 1e-10 * fro2);
  }
}

TEST(Lstsq, OrthonormalBasisGivesProjection) {
  std::mt19937_64 rng(41);
  const DenseMatrix q = ts::random_orthonormal(15, 4, rng);
  const Vector rhs = ts::random_vector(15, rng);
  const Vector z = lstsq(q, rhs);
  const Vector want = matvec_transposed(q, rhs);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(z[i], want[i], 1e-12);
}

TEST(Lstsq, SquareNonsingularIsExact) {
  std::mt19937_64 rng(43);
  const DenseMatrix b = ts::random_matrix(5, 5, rng);
  const Vector rhs = ts::random_vector(5, rng);
  const Vector z = lstsq(b, rhs);
  EXPECT_LE(norm2(subtract(matvec(b, z), rhs)), 1e-10 * norm2(rhs));
}

TEST(Lstsq, MatchesNormalEquationsOracle) {
  std::mt19937_64 rng(47);
  const DenseMatrix b = ts::random_matrix(40, 5, rng);
  const Vector rhs = ts::random_vector(40, rng);
  const Vector z = lstsq(b, rhs);

  // Normal equations (B^T B) z = B^T rhs solved densely.
  ts::Dense gram(5, std::vector<double>(5, 0.0));
  std::vector<double> bt_rhs(5, 0.0);
  for (std::size_t a = 0; a < 5; ++a) {
    for (std::size_t c = 0; c < 5; ++c)
      for (std::size_t i = 0; i < 40; ++i) gram[a][c] += b(i, a) * b(i, c);
    for (std::size_t i = 0; i < 40; ++i) bt_rhs[a] += b(i, a) * rhs[i];
  }
  const std::vector<double> z_oracle = ts::dense_lu_solve(gram, bt_rhs);

  const double res = norm2(subtract(matvec(b, z), rhs));
  Vector zo(z_oracle.begin(), z_oracle.end());
  const double res_oracle = norm2(subtract(matvec(b, zo), rhs));
  EXPECT_NEAR(res, res_oracle, 1e-8 * res_oracle);
}

TEST(Lstsq, LocalOptimalityProbe) {
  std::mt19937_64 rng(53);
  const DenseMatrix b = ts::random_matrix(30, 6, rng);
  const Vector rhs = ts::random_vector(30, rng);
  const Vector z = lstsq(b, rhs);
  const double res = norm2(subtract(matvec(b, z), rhs));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int probe = 0; probe < 100; ++probe) {
    Vector zp = z;
    for (double& e : zp) e += 1e-3 * normal(rng);
    const double rp = norm2(subtract(matvec(b, zp), rhs));
    EXPECT_GE(rp, res - 1e-12 * res);
  }
}

TEST(Lstsq, RankDeficientZeroesDroppedComponents) {
  std::mt19937_64 rng(59);
  DenseMatrix b(20, 3);
  const Vector base = ts::random_vector(20, rng);
  for (std::size_t i = 0; i < 20; ++i) {
    b(i, 0) = base[i];
    b(i, 1) = 2.0 * base[i];
    b(i, 2) = -base[i];
  }
  const Vector rhs = ts::random_vector(20, rng);
  const Vector z = lstsq(b, rhs);
  // Rank 1: two of the three components fall on negligible diagonal entries.
  int zeros = 0;
  for (double e : z)
    if (e == 0.0) ++zeros;
  EXPECT_EQ(zeros, 2);
  // Still a minimizer: residual orthogonal to the range.
  const Vector resid = subtract(matvec(b, z), rhs);
  EXPECT_LE(std::abs(dot(resid, b.column(0))), 1e-9 * norm2(resid) * norm2(b.column(0)));
}
