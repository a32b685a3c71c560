#include "natred/operator_space.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "natred/errors.hpp"

namespace natred {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr int kTaylorTerms = 24;

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DomainError(std::string(what) + ": expected a nonempty square matrix");
  }
  if (!m.allFinite()) {
    throw DomainError(std::string(what) + ": entries must be finite");
  }
}

void require_same_dim(int a, int b, const char* what) {
  if (a != b) {
    throw DomainError(std::string(what) + ": dimension mismatch (" + std::to_string(a) + " vs " +
                      std::to_string(b) + ")");
  }
}

}  // namespace

EndOp::EndOp(Matrix entries) : m_(std::move(entries)) { require_square(m_, "EndOp"); }

EndOp EndOp::identity(int dim) { return EndOp(Matrix::Identity(dim, dim)); }
EndOp EndOp::zero(int dim) { return EndOp(Matrix::Zero(dim, dim)); }

SymOp::SymOp(const Matrix& entries) {
  require_square(entries, "SymOp");
  const double norm = entries.norm();
  const double asym = (0.5 * (entries - entries.transpose())).norm();
  if (asym > kSymmetryTol * norm) {
    throw DomainError("SymOp: input is not self-adjoint (antisymmetric part " + std::to_string(asym) +
                      ", norm " + std::to_string(norm) + ")");
  }
  m_ = 0.5 * (entries + entries.transpose());
}

SymOp SymOp::zero(int dim) { return SymOp(Matrix::Zero(dim, dim), Trusted{}); }
SymOp SymOp::identity(int dim) { return SymOp(Matrix::Identity(dim, dim), Trusted{}); }

SymOp operator+(const SymOp& a, const SymOp& b) {
  require_same_dim(a.dim(), b.dim(), "SymOp +");
  return SymOp(a.m_ + b.m_, SymOp::Trusted{});
}

SymOp operator-(const SymOp& a, const SymOp& b) {
  require_same_dim(a.dim(), b.dim(), "SymOp -");
  return SymOp(a.m_ - b.m_, SymOp::Trusted{});
}

SymOp operator*(double s, const SymOp& a) { return SymOp(s * a.m_, SymOp::Trusted{}); }

SkewOp::SkewOp(const Matrix& entries) {
  require_square(entries, "SkewOp");
  const double norm = entries.norm();
  const double sym = (0.5 * (entries + entries.transpose())).norm();
  if (sym > kSymmetryTol * norm) {
    throw DomainError("SkewOp: input is not skew-adjoint (symmetric part " + std::to_string(sym) +
                      ", norm " + std::to_string(norm) + ")");
  }
  m_ = 0.5 * (entries - entries.transpose());
}

SkewOp SkewOp::zero(int dim) { return SkewOp(Matrix::Zero(dim, dim)); }

SymOp SkewOp::squared() const { return SymOp(Matrix(m_ * m_)); }

double frobenius_inner(const SymOp& a, const SymOp& b) {
  require_same_dim(a.dim(), b.dim(), "frobenius_inner");
  return (a.matrix().array() * b.matrix().array()).sum();
}

double frobenius_inner(const EndOp& a, const EndOp& b) {
  require_same_dim(a.dim(), b.dim(), "frobenius_inner");
  return (a.matrix().array() * b.matrix().array()).sum();
}

Matrix mat_exp(const Matrix& a) {
  require_square(a, "mat_exp");
  const auto n = a.rows();
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
  }
  const Matrix b = a / std::ldexp(1.0, squarings);

  // Horner evaluation of sum_{k<=N} b^k / k!
  Matrix result = Matrix::Identity(n, n);
  for (int k = kTaylorTerms; k >= 1; --k) {
    result = Matrix::Identity(n, n) + (b * result) / static_cast<double>(k);
  }
  for (int i = 0; i < squarings; ++i) {
    result = result * result;
  }
  return result;
}

EndOp mat_exp(const SkewOp& generator, double t) {
  if (t == 0.0) {
    return EndOp::identity(generator.dim());
  }
  return EndOp(mat_exp(Matrix(t * generator.matrix())));
}

SymOp adjoint_action(const EndOp& g, const SymOp& r) {
  require_same_dim(g.dim(), r.dim(), "adjoint_action");
  Eigen::FullPivLU<Matrix> lu(g.matrix());
  if (!lu.isInvertible()) {
    throw DomainError("adjoint_action: g is singular");
  }
  return SymOp(Matrix(g.matrix() * r.matrix() * lu.inverse()));
}

EndOp derivation_action(const SkewOp& s, const EndOp& r) {
  require_same_dim(s.dim(), r.dim(), "derivation_action");
  return EndOp(Matrix(s.matrix() * r.matrix() - r.matrix() * s.matrix()));
}

SymOp derivation_action(const SkewOp& s, const SymOp& r) {
  require_same_dim(s.dim(), r.dim(), "derivation_action");
  return SymOp(Matrix(s.matrix() * r.matrix() - r.matrix() * s.matrix()));
}

int numerical_rank(std::span<const SymOp> ops, double tol, double reference_scale) {
  if (ops.empty()) {
    throw DomainError("numerical_rank: empty operator list");
  }
  if (!(tol > 0.0)) {
    throw DomainError("numerical_rank: tolerance must be positive");
  }
  const auto count = static_cast<Eigen::Index>(ops.size());
  Matrix gram(count, count);
  for (Eigen::Index i = 0; i < count; ++i) {
    for (Eigen::Index j = i; j < count; ++j) {
      gram(i, j) = gram(j, i) = frobenius_inner(ops[i], ops[j]);
    }
  }
  // The Gram matrix is positive semidefinite, so |eigenvalues| are its singular values.
  const Vector sigma = Eigen::SelfAdjointEigenSolver<Matrix>(gram, Eigen::EigenvaluesOnly)
                           .eigenvalues()
                           .cwiseAbs();
  const double largest = sigma.maxCoeff();
  if (largest == 0.0) {
    return 0;
  }
  const double threshold = tol * std::max(largest, reference_scale);
  return static_cast<int>((sigma.array() > threshold).count());
}

int matrix_rank(const Matrix& m, double tol) {
  if (m.size() == 0) {
    return 0;
  }
  const Vector sigma = Eigen::JacobiSVD<Matrix>(m).singularValues();
  const double largest = sigma.maxCoeff();
  if (largest == 0.0) {
    return 0;
  }
  return static_cast<int>((sigma.array() > tol * largest).count());
}

}  // namespace natred
