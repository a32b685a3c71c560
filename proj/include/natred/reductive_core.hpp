#pragma once

#include <optional>
#include <vector>

#include "natred/operator_space.hpp"

namespace natred {

/// Structure constants of a reductive decomposition g = m + k together with an
/// inner product on m.
///
/// Basis of m is x_0..x_{n-1}; basis of k is A_0..A_{q-1}. The four tables give
///   [x_i, x_j] = sum_k mm_m(i,j,k) x_k + sum_a mm_k(i,j,a) A_a
///   [A_a, x_j] = sum_k km(a,j,k) x_k
///   [A_a, A_b] = sum_c kk(a,b,c) A_c
/// so [k, m] lands in m by construction. The constructor rejects tables that are
/// not antisymmetric, violate the Jacobi identity beyond 1e-10, or come with a
/// metric that is not symmetric positive definite.
class ReductiveAlgebra {
 public:
  /// Raw tables, row-major, indexed as documented above.
  struct Tables {
    int dim_m = 0;
    int dim_k = 0;
    std::vector<double> mm_m;  // n*n*n
    std::vector<double> mm_k;  // n*n*q
    std::vector<double> km;    // q*n*n
    std::vector<double> kk;    // q*q*q
    Matrix metric_m;           // n*n

    static Tables zeros(int dim_m, int dim_k);
    double& mm_m_at(int i, int j, int k) { return mm_m[(i * dim_m + j) * dim_m + k]; }
    double& mm_k_at(int i, int j, int a) { return mm_k[(i * dim_m + j) * dim_k + a]; }
    double& km_at(int a, int j, int k) { return km[(a * dim_m + j) * dim_m + k]; }
    double& kk_at(int a, int b, int c) { return kk[(a * dim_k + b) * dim_k + c]; }
  };

  explicit ReductiveAlgebra(Tables tables);

  int dim_m() const { return t_.dim_m; }
  int dim_k() const { return t_.dim_k; }
  const Matrix& metric() const { return t_.metric_m; }
  const Tables& tables() const { return t_; }

  double mm_m(int i, int j, int k) const { return t_.mm_m[(i * t_.dim_m + j) * t_.dim_m + k]; }
  double mm_k(int i, int j, int a) const { return t_.mm_k[(i * t_.dim_m + j) * t_.dim_k + a]; }
  double km(int a, int j, int k) const { return t_.km[(a * t_.dim_m + j) * t_.dim_m + k]; }
  double kk(int a, int b, int c) const { return t_.kk[(a * t_.dim_k + b) * t_.dim_k + c]; }

  /// True when metric_m is the identity to 1e-12, i.e. the m-basis is orthonormal.
  bool is_orthonormal() const;

  /// Equivalent algebra written in an orthonormal basis f = x L^{-T}, where
  /// metric = L L^T. A vector with old coordinates v has new coordinates L^T v.
  ReductiveAlgebra orthonormalized() const;
  /// L^T, the coordinate change used by orthonormalized().
  Matrix orthonormal_coordinates() const;

  /// Matrix of X -> [u, X]_m.
  Matrix ad_m(const Vector& u) const;
  /// Coefficients of [u, v]_k in the basis A_a.
  Vector bracket_k(const Vector& u, const Vector& v) const;
  /// Matrix of X -> [A_a, X] on m.
  Matrix ad_k_generator(int a) const;
  /// Matrix of X -> [[u, X]_k, u].
  Matrix canonical_curvature_matrix(const Vector& u) const;

  /// Full bracket on g, coordinates ordered (m-part, k-part).
  Vector bracket(const Vector& x, const Vector& y) const;
  /// Largest |[X,[Y,Z]] + [Y,[Z,X]] + [Z,[X,Y]]| over basis triples of g.
  double jacobi_residual() const;

 private:
  Tables t_;
};

struct NaturallyReductiveCheck {
  bool naturally_reductive = false;
  double max_violation = 0.0;
};

/// Tests <[X,Y]_m, Z> + <[X,Z]_m, Y> = 0 on all basis triples of m (tolerance 1e-10).
NaturallyReductiveCheck check_naturally_reductive(const ReductiveAlgebra& alg);

/// Torsion operator X -> -[u, X]_m of the canonical connection.
EndOp torsion(const ReductiveAlgebra& alg, const Vector& u);

/// Canonical curvature operator X -> [[u, X]_k, u]. Requires an orthonormal m-basis.
SymOp canonical_curvature(const ReductiveAlgebra& alg, const Vector& u);

/// Homogeneous structure S_u X = 1/2 [u, X]_m. Requires an orthonormal m-basis
/// and a naturally reductive algebra (otherwise the result is not skew).
SkewOp s_operator(const ReductiveAlgebra& alg, const Vector& u);

/// Levi-Civita Jacobi operator R_u = Rtilde_u - S_u^2 for a unit vector u.
SymOp riemann_jacobi_operator(const ReductiveAlgebra& alg, const Vector& u);

/// R_{xy} = Rtilde_{xy} - [S_x, S_y] + 2 S_{S_x y}, with Rtilde_{xy} = ad_{[x,y]_k}.
/// With this convention R_u(X) = R_{uX} u.
EndOp full_curvature(const ReductiveAlgebra& alg, const Vector& x, const Vector& y);

/// Inner product on g extending metric_m by r on the single k-generator, with m and k orthogonal.
struct BiInvariantCandidate {
  double r = 1.0;
  const ReductiveAlgebra* base = nullptr;

  /// Largest |B([X,Y],Z) + B([X,Z],Y)| over basis triples of g.
  double violation() const;
};

struct BiInvariantExtension {
  std::optional<double> r;    ///< present only when a positive r satisfies ad-invariance
  bool indeterminate = false; ///< every r works; r is then reported as 1
  double residual = 0.0;      ///< max violation at the least-squares r
  double least_squares_r = 0.0;
};

/// Finds r > 0 making B_r ad-invariant. Requires dim_k = 1.
BiInvariantExtension bi_invariant_extension(const ReductiveAlgebra& alg);

}  // namespace natred
