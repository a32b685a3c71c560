#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <vector>

#include "natred/errors.hpp"
#include "natred/m3_geometry.hpp"
#include "natred/operator_space.hpp"
#include "test_support.hpp"

namespace natred {
namespace {

using std::numbers::pi;
using testing::max_abs;

// Classical RK4 on M' = S M, M(0) = I.
Matrix rk4_exp(const Matrix& s, double t, int steps) {
  Matrix m = Matrix::Identity(s.rows(), s.cols());
  const double h = t / steps;
  for (int i = 0; i < steps; ++i) {
    const Matrix k1 = s * m;
    const Matrix k2 = s * (m + 0.5 * h * k1);
    const Matrix k3 = s * (m + 0.5 * h * k2);
    const Matrix k4 = s * (m + h * k3);
    m += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return m;
}

TEST(EndOp, RejectsBadInput) {
  EXPECT_THROW(EndOp(Matrix(2, 3)), DomainError);
  EXPECT_THROW(EndOp(Matrix(0, 0)), DomainError);
  Matrix m = Matrix::Identity(2, 2);
  m(0, 1) = NAN;
  EXPECT_THROW(EndOp{m}, DomainError);
}

TEST(SymOp, SymmetrizesAndRejectsAsymmetry) {
  Matrix m(2, 2);
  m << 1, 2, 2 + 1e-15, 3;
  const SymOp s(m);
  EXPECT_EQ(s(0, 1), s(1, 0));
  m(1, 0) = 2.5;
  EXPECT_THROW(SymOp{m}, DomainError);
}

TEST(SkewOp, ExactAntisymmetry) {
  Matrix m(3, 3);
  m << 1e-17, 1, 2, -1, 0, 3, -2, -3, 0;
  const SkewOp s(m);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(s(i, i), 0.0);
    for (int j = 0; j < 3; ++j) EXPECT_EQ(s(i, j), -s(j, i));
  }
  EXPECT_THROW(SkewOp{Matrix(Matrix::Identity(3, 3))}, DomainError);
}

TEST(FrobeniusInner, Examples) {
  EXPECT_DOUBLE_EQ(frobenius_inner(SymOp::identity(3), SymOp::identity(3)), 3.0);
  Sampler rng(1);
  EXPECT_EQ(frobenius_inner(SymOp::zero(3), testing::random_sym(rng, 3)), 0.0);
  const auto v = frame_v(pi / 2);
  EXPECT_NEAR(frobenius_inner(v[0], v[0]), 1.0, 1e-15);
}

TEST(FrobeniusInner, SymmetricBilinearAndTrace) {
  Sampler rng(2);
  for (int i = 0; i < 50; ++i) {
    const SymOp a = testing::random_sym(rng, 4), b = testing::random_sym(rng, 4), c = testing::random_sym(rng, 4);
    const double x = rng.uniform(-2, 2);
    EXPECT_NEAR(frobenius_inner(a, b), frobenius_inner(b, a), 1e-14);
    EXPECT_NEAR(frobenius_inner(x * a + b, c), x * frobenius_inner(a, c) + frobenius_inner(b, c), 1e-13);
    EXPECT_NEAR(frobenius_inner(a, b), (a.matrix().transpose() * b.matrix()).trace(), 1e-14);
  }
  EXPECT_THROW(frobenius_inner(SymOp::zero(2), SymOp::zero(3)), DomainError);
}

TEST(MatExp, Examples) {
  Sampler rng(3);
  const SkewOp s = testing::random_skew(rng, 3);
  EXPECT_EQ(max_abs(mat_exp(s, 0.0).matrix() - Matrix::Identity(3, 3)), 0.0);

  Matrix g = Matrix::Zero(3, 3);
  g(1, 0) = 1;
  g(0, 1) = -1;
  const Vector e1 = mat_exp(SkewOp(g), pi / 2).matrix() * Vector::Unit(3, 0);
  EXPECT_LT((e1 - Vector::Unit(3, 1)).norm(), 1e-15);
}

TEST(MatExp, AgreesWithRk4Oracle) {
  const auto data = operator_data(M3Params(1, 2), Direction(pi / 3));
  const Matrix oracle = rk4_exp(data.s.matrix(), 0.7, 20000);
  EXPECT_LT(max_abs(mat_exp(data.s, 0.7).matrix() - oracle), 1e-10);
}

TEST(MatExp, InverseAndOrthogonalityProperty) {
  Sampler rng(4);
  for (int i = 0; i < 100; ++i) {
    const int n = rng.integer(2, 6);
    SkewOp s = testing::random_skew(rng, n);
    const double norm = s.matrix().operatorNorm();
    const double target = rng.uniform(0.0, 10.0);
    s = SkewOp(Matrix(s.matrix() * (target / norm)));
    const double t = rng.uniform(-10, 10);
    const Matrix a = mat_exp(s, t).matrix();
    const Matrix b = mat_exp(s, -t).matrix();
    EXPECT_LT(max_abs(a * b - Matrix::Identity(n, n)), 1e-12);
    EXPECT_LT(max_abs(a * a.transpose() - Matrix::Identity(n, n)), 1e-12);
  }
}

TEST(MatExp, GeneralMatrixMatchesDiagonalCase) {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.5;
  d(1, 1) = -2.0;
  const Matrix e = mat_exp(d);
  EXPECT_NEAR(e(0, 0), std::exp(1.5), 1e-13);
  EXPECT_NEAR(e(1, 1), std::exp(-2.0), 1e-15);
}

TEST(AdjointAction, Examples) {
  Sampler rng(5);
  const SymOp r = testing::random_sym(rng, 3);
  EXPECT_LT(max_abs(adjoint_action(EndOp::identity(3), r).matrix() - r.matrix()), 1e-15);

  const Matrix q = testing::random_orthogonal(rng, 3);
  const SymOp conj = adjoint_action(EndOp(q), r);
  Eigen::SelfAdjointEigenSolver<Matrix> e1(r.matrix()), e2(conj.matrix());
  EXPECT_LT((e1.eigenvalues() - e2.eigenvalues()).cwiseAbs().maxCoeff(), 1e-13);

  EXPECT_THROW(adjoint_action(EndOp::zero(3), r), DomainError);
}

TEST(AdjointAction, RotationMovesJacobiOperator) {
  const M3Params p(1, 2);
  const auto at0 = operator_data(p, Direction(pi / 2));
  const auto rotated = operator_data(p, Direction(pi / 2, pi / 4));
  const SymOp conj = adjoint_action(mat_exp(a12_generator(), pi / 4), at0.r);
  EXPECT_LT(max_abs(conj.matrix() - rotated.r.matrix()), 1e-14);
}

TEST(AdjointAction, PreservesInnerProductProperty) {
  Sampler rng(6);
  for (int i = 0; i < 50; ++i) {
    const int n = rng.integer(2, 6);
    const EndOp g(testing::random_orthogonal(rng, n));
    const SymOp a = testing::random_sym(rng, n), b = testing::random_sym(rng, n);
    EXPECT_NEAR(frobenius_inner(adjoint_action(g, a), adjoint_action(g, b)), frobenius_inner(a, b), 1e-12);
  }
}

TEST(DerivationAction, Examples) {
  Sampler rng(7);
  const SkewOp s = testing::random_skew(rng, 3);
  EXPECT_LT(max_abs(derivation_action(s, SymOp::identity(3)).matrix()), 1e-16);
  EXPECT_LT(max_abs(derivation_action(s, s.squared()).matrix()), 1e-15);

  // S . Rtilde at theta = pi/2, kappa = 1, tau = 2: tau^3 mu [[0,0,0],[0,0,-1],[0,-1,0]], mu = 3/8.
  const auto data = operator_data(M3Params(1, 2), Direction(pi / 2));
  Matrix expected = Matrix::Zero(3, 3);
  expected(1, 2) = expected(2, 1) = -1.0;
  expected *= 8.0 * 3.0 / 8.0;
  EXPECT_LT(max_abs(derivation_action(data.s, data.rtilde).matrix() - expected), 1e-14);
}

TEST(DerivationAction, LeibnizProperty) {
  Sampler rng(8);
  for (int i = 0; i < 100; ++i) {
    const SkewOp s = testing::random_skew(rng, 3);
    const Matrix a = testing::random_matrix(rng, 3), b = testing::random_matrix(rng, 3);
    const Matrix lhs = derivation_action(s, EndOp(a * b)).matrix();
    const Matrix rhs =
        derivation_action(s, EndOp(a)).matrix() * b + a * derivation_action(s, EndOp(b)).matrix();
    EXPECT_LT(max_abs(lhs - rhs), 1e-10);
  }
}

TEST(DerivationAction, SelfAdjointResult) {
  Sampler rng(9);
  const SkewOp s = testing::random_skew(rng, 4);
  const SymOp r = testing::random_sym(rng, 4);
  const Matrix m = derivation_action(s, r.as_end()).matrix();
  EXPECT_LT(max_abs(m - m.transpose()), 1e-15);
}

TEST(NumericalRank, Examples) {
  EXPECT_EQ(numerical_rank(std::vector<SymOp>{SymOp::zero(3)}), 0);
  Sampler rng(10);
  const SymOp k = testing::random_sym(rng, 3);
  EXPECT_EQ(numerical_rank(std::vector<SymOp>{k, 2.0 * k}), 1);

  const auto data = operator_data(M3Params(1, 2), Direction(pi / 2));
  const SymOp d1 = derivation_action(data.s, data.rtilde);
  const SymOp d2 = derivation_action(data.s, d1);
  const SymOp d3 = derivation_action(data.s, d2);
  EXPECT_EQ(numerical_rank(std::vector<SymOp>{d1, d2, d3}), 2);
  EXPECT_LT(max_abs(d3.matrix() + 4.0 * d1.matrix()), 1e-13);

  EXPECT_THROW(numerical_rank(std::vector<SymOp>{}), DomainError);
  EXPECT_THROW(numerical_rank(std::vector<SymOp>{k}, 0.0), DomainError);
}

TEST(NumericalRank, InvariantUnderConjugationProperty) {
  Sampler rng(11);
  for (int i = 0; i < 50; ++i) {
    const int n = rng.integer(3, 5);
    const int count = rng.integer(1, 6);
    const int true_rank = rng.integer(0, std::min(count, 3));
    std::vector<SymOp> basis, ops;
    for (int j = 0; j < true_rank; ++j) basis.push_back(testing::random_sym(rng, n));
    for (int j = 0; j < count; ++j) {
      SymOp acc = SymOp::zero(n);
      for (const auto& b : basis) acc = acc + rng.uniform(-1, 1) * b;
      ops.push_back(acc);
    }
    const EndOp g(testing::random_orthogonal(rng, n));
    std::vector<SymOp> conj;
    for (const auto& o : ops) conj.push_back(adjoint_action(g, o));
    const int r = numerical_rank(ops);
    EXPECT_EQ(r, numerical_rank(conj));
    EXPECT_LE(r, true_rank);
  }
}

TEST(MatrixRank, Basic) {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = 1;
  m(1, 1) = 2;
  EXPECT_EQ(matrix_rank(m), 2);
}

}  // namespace
}  // namespace natred
