#pragma once

#include <Eigen/Core>

#include <span>
#include <utility>

namespace natred {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// An endomorphism of m, stored as a dense square matrix acting on column vectors.
class EndOp {
 public:
  explicit EndOp(Matrix entries);

  static EndOp identity(int dim);
  static EndOp zero(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

 private:
  Matrix m_;
};

/// Self-adjoint operator with respect to an orthonormal basis of m.
///
/// Construction symmetrizes the input after checking that its antisymmetric
/// part is below 1e-12 of its Frobenius norm; larger asymmetry is rejected.
class SymOp {
 public:
  explicit SymOp(const Matrix& entries);
  explicit SymOp(const EndOp& op) : SymOp(op.matrix()) {}

  static SymOp zero(int dim);
  static SymOp identity(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }
  EndOp as_end() const { return EndOp(m_); }

  friend SymOp operator+(const SymOp& a, const SymOp& b);
  friend SymOp operator-(const SymOp& a, const SymOp& b);
  friend SymOp operator*(double s, const SymOp& a);

 private:
  struct Trusted {};
  SymOp(Matrix entries, Trusted) : m_(std::move(entries)) {}
  Matrix m_;
};

/// Skew-adjoint operator; the diagonal is exactly zero.
class SkewOp {
 public:
  explicit SkewOp(const Matrix& entries);

  static SkewOp zero(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }
  EndOp as_end() const { return EndOp(m_); }

  /// S*S, which is self-adjoint.
  SymOp squared() const;

 private:
  Matrix m_;
};

/// Trace inner product <K, K'> = sum_i <K e_i, K' e_i> = tr(K^T K').
double frobenius_inner(const SymOp& a, const SymOp& b);
double frobenius_inner(const EndOp& a, const EndOp& b);

/// e^{tS} by scaling and squaring with a 24-term Taylor polynomial.
EndOp mat_exp(const SkewOp& generator, double t);

/// General real matrix exponential, same algorithm as above.
Matrix mat_exp(const Matrix& a);

/// g R g^{-1}. Throws DomainError when g is singular or the result is not self-adjoint.
SymOp adjoint_action(const EndOp& g, const SymOp& r);

/// S R - R S. For self-adjoint R this is again self-adjoint.
EndOp derivation_action(const SkewOp& s, const EndOp& r);
SymOp derivation_action(const SkewOp& s, const SymOp& r);

/// Rank of the Gram matrix G_ij = <ops_i, ops_j>: the number of singular values
/// of G above tol * max(sigma_max, reference_scale). reference_scale = 0 gives a
/// purely relative test. An all-zero list has rank 0.
int numerical_rank(std::span<const SymOp> ops, double tol = 1e-9, double reference_scale = 0.0);

/// Rank of an arbitrary matrix: singular values above tol * sigma_max.
int matrix_rank(const Matrix& m, double tol = 1e-9);

}  // namespace natred
