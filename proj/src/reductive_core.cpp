#include "natred/reductive_core.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "natred/errors.hpp"

namespace natred {

namespace {

constexpr double kAntisymmetryTol = 1e-12;
constexpr double kJacobiTol = 1e-10;
constexpr double kNaturallyReductiveTol = 1e-10;
constexpr double kUnitTol = 1e-10;
constexpr double kBiInvariantTol = 1e-10;

void check_size(const std::vector<double>& v, std::size_t expected, const char* name) {
  if (v.size() != expected) {
    throw DomainError(std::string("ReductiveAlgebra: table ") + name + " has " + std::to_string(v.size()) +
                      " entries, expected " + std::to_string(expected));
  }
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw DomainError(std::string("ReductiveAlgebra: table ") + name + " has a non-finite entry");
    }
  }
}

// Antisymmetrizes table(i,j,*) over the first two slots, rejecting visible asymmetry.
void antisymmetrize(std::vector<double>& table, int dim, int depth, const char* name) {
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      for (int k = 0; k < depth; ++k) {
        double& a = table[(i * dim + j) * depth + k];
        double& b = table[(j * dim + i) * depth + k];
        const double scale = std::max({1.0, std::abs(a), std::abs(b)});
        if (std::abs(a + b) > kAntisymmetryTol * scale) {
          throw DomainError(std::string("ReductiveAlgebra: table ") + name + " is not antisymmetric at (" +
                            std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + ")");
        }
        const double value = (i == j) ? 0.0 : 0.5 * (a - b);
        a = value;
        b = -value;
      }
    }
  }
}

void require_orthonormal(const ReductiveAlgebra& alg, const char* what) {
  if (!alg.is_orthonormal()) {
    throw DomainError(std::string(what) +
                      ": the m-basis is not orthonormal; use ReductiveAlgebra::orthonormalized()");
  }
}

void require_m_vector(const ReductiveAlgebra& alg, const Vector& u, const char* what) {
  if (u.size() != alg.dim_m()) {
    throw DomainError(std::string(what) + ": vector has dimension " + std::to_string(u.size()) +
                      ", expected " + std::to_string(alg.dim_m()));
  }
  if (!u.allFinite()) {
    throw DomainError(std::string(what) + ": vector has non-finite entries");
  }
}

Vector basis_vector(int size, int index) {
  Vector v = Vector::Zero(size);
  v(index) = 1.0;
  return v;
}

}  // namespace

ReductiveAlgebra::Tables ReductiveAlgebra::Tables::zeros(int dim_m, int dim_k) {
  Tables t;
  t.dim_m = dim_m;
  t.dim_k = dim_k;
  const auto n = static_cast<std::size_t>(std::max(dim_m, 0));
  const auto q = static_cast<std::size_t>(std::max(dim_k, 0));
  t.mm_m.assign(n * n * n, 0.0);
  t.mm_k.assign(n * n * q, 0.0);
  t.km.assign(q * n * n, 0.0);
  t.kk.assign(q * q * q, 0.0);
  t.metric_m = Matrix::Identity(dim_m, dim_m);
  return t;
}

ReductiveAlgebra::ReductiveAlgebra(Tables tables) : t_(std::move(tables)) {
  const int n = t_.dim_m;
  const int q = t_.dim_k;
  if (n < 1) {
    throw DomainError("ReductiveAlgebra: dim_m must be positive");
  }
  if (q < 0) {
    throw DomainError("ReductiveAlgebra: dim_k must be nonnegative");
  }
  const auto nn = static_cast<std::size_t>(n);
  const auto qq = static_cast<std::size_t>(q);
  check_size(t_.mm_m, nn * nn * nn, "mm_m");
  check_size(t_.mm_k, nn * nn * qq, "mm_k");
  check_size(t_.km, qq * nn * nn, "km");
  check_size(t_.kk, qq * qq * qq, "kk");

  antisymmetrize(t_.mm_m, n, n, "mm_m");
  antisymmetrize(t_.mm_k, n, q, "mm_k");
  antisymmetrize(t_.kk, q, q, "kk");

  if (t_.metric_m.rows() != n || t_.metric_m.cols() != n || !t_.metric_m.allFinite()) {
    throw DomainError("ReductiveAlgebra: metric_m must be a finite dim_m x dim_m matrix");
  }
  const double asym = (t_.metric_m - t_.metric_m.transpose()).cwiseAbs().maxCoeff();
  if (asym > kAntisymmetryTol * std::max(1.0, t_.metric_m.cwiseAbs().maxCoeff())) {
    throw DomainError("ReductiveAlgebra: metric_m is not symmetric");
  }
  t_.metric_m = 0.5 * (t_.metric_m + t_.metric_m.transpose());
  Eigen::LLT<Matrix> llt(t_.metric_m);
  if (llt.info() != Eigen::Success) {
    throw DomainError("ReductiveAlgebra: metric_m is not positive definite");
  }

  double cmax = 0.0;
  for (const auto* table : {&t_.mm_m, &t_.mm_k, &t_.km, &t_.kk}) {
    for (double x : *table) cmax = std::max(cmax, std::abs(x));
  }
  const double residual = jacobi_residual();
  if (residual > kJacobiTol * std::max(1.0, cmax * cmax)) {
    throw DomainError("ReductiveAlgebra: Jacobi identity violated (residual " + std::to_string(residual) + ")");
  }
}

bool ReductiveAlgebra::is_orthonormal() const {
  return (t_.metric_m - Matrix::Identity(t_.dim_m, t_.dim_m)).cwiseAbs().maxCoeff() <= 1e-12;
}

Matrix ReductiveAlgebra::orthonormal_coordinates() const {
  Eigen::LLT<Matrix> llt(t_.metric_m);
  return llt.matrixL().transpose();
}

ReductiveAlgebra ReductiveAlgebra::orthonormalized() const {
  const int n = t_.dim_m;
  const int q = t_.dim_k;
  const Matrix lt = orthonormal_coordinates();             // new coords = lt * old coords
  const Matrix p = lt.fullPivLu().inverse();               // f_a = sum_i x_i p(i,a)

  Tables out = Tables::zeros(n, q);
  out.kk = t_.kk;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const double w = p(i, a) * p(j, b);
          if (w == 0.0) continue;
          for (int k = 0; k < n; ++k) {
            const double c = mm_m(i, j, k) * w;
            for (int d = 0; d < n; ++d) out.mm_m_at(a, b, d) += c * lt(d, k);
          }
          for (int c = 0; c < q; ++c) out.mm_k_at(a, b, c) += w * mm_k(i, j, c);
        }
      }
    }
  }
  for (int c = 0; c < q; ++c) {
    for (int b = 0; b < n; ++b) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          const double w = p(j, b) * km(c, j, k);
          for (int d = 0; d < n; ++d) out.km_at(c, b, d) += w * lt(d, k);
        }
      }
    }
  }
  out.metric_m = Matrix::Identity(n, n);
  return ReductiveAlgebra(std::move(out));
}

Matrix ReductiveAlgebra::ad_m(const Vector& u) const {
  const int n = t_.dim_m;
  Matrix m = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (u(i) == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) m(k, j) += u(i) * mm_m(i, j, k);
    }
  }
  return m;
}

Vector ReductiveAlgebra::bracket_k(const Vector& u, const Vector& v) const {
  const int n = t_.dim_m;
  Vector c = Vector::Zero(t_.dim_k);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double w = u(i) * v(j);
      if (w == 0.0) continue;
      for (int a = 0; a < t_.dim_k; ++a) c(a) += w * mm_k(i, j, a);
    }
  }
  return c;
}

Matrix ReductiveAlgebra::ad_k_generator(int a) const {
  const int n = t_.dim_m;
  Matrix m(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) m(k, j) = km(a, j, k);
  }
  return m;
}

Matrix ReductiveAlgebra::canonical_curvature_matrix(const Vector& u) const {
  const int n = t_.dim_m;
  Matrix out = Matrix::Zero(n, n);
  for (int a = 0; a < t_.dim_k; ++a) {
    const Vector au = ad_k_generator(a) * u;  // [A_a, u]
    for (int j = 0; j < n; ++j) {
      double c = 0.0;
      for (int i = 0; i < n; ++i) c += u(i) * mm_k(i, j, a);  // ([u, x_j]_k)^a
      out.col(j) += c * au;
    }
  }
  return out;
}

Vector ReductiveAlgebra::bracket(const Vector& x, const Vector& y) const {
  const int n = t_.dim_m;
  const int q = t_.dim_k;
  Vector out = Vector::Zero(n + q);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double w = x(i) * y(j);
      if (w == 0.0) continue;
      for (int k = 0; k < n; ++k) out(k) += w * mm_m(i, j, k);
      for (int a = 0; a < q; ++a) out(n + a) += w * mm_k(i, j, a);
    }
  }
  for (int a = 0; a < q; ++a) {
    for (int j = 0; j < n; ++j) {
      // [A_a, x_j] contributes with x_k(a) y_m(j) and, with a sign flip, x_m(j) y_k(a).
      const double w = x(n + a) * y(j) - x(j) * y(n + a);
      if (w == 0.0) continue;
      for (int k = 0; k < n; ++k) out(k) += w * km(a, j, k);
    }
    for (int b = 0; b < q; ++b) {
      const double w = x(n + a) * y(n + b);
      if (w == 0.0) continue;
      for (int c = 0; c < q; ++c) out(n + c) += w * kk(a, b, c);
    }
  }
  return out;
}

double ReductiveAlgebra::jacobi_residual() const {
  const int total = t_.dim_m + t_.dim_k;
  double worst = 0.0;
  for (int i = 0; i < total; ++i) {
    const Vector x = basis_vector(total, i);
    for (int j = i + 1; j < total; ++j) {
      const Vector y = basis_vector(total, j);
      for (int k = j + 1; k < total; ++k) {
        const Vector z = basis_vector(total, k);
        const Vector r = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y));
        worst = std::max(worst, r.cwiseAbs().maxCoeff());
      }
    }
  }
  return worst;
}

NaturallyReductiveCheck check_naturally_reductive(const ReductiveAlgebra& alg) {
  const int n = alg.dim_m();
  const Matrix& g = alg.metric();
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        double v = 0.0;
        for (int l = 0; l < n; ++l) v += alg.mm_m(i, j, l) * g(l, k) + alg.mm_m(i, k, l) * g(l, j);
        worst = std::max(worst, std::abs(v));
      }
    }
  }
  return {worst <= kNaturallyReductiveTol, worst};
}

EndOp torsion(const ReductiveAlgebra& alg, const Vector& u) {
  require_m_vector(alg, u, "torsion");
  return EndOp(Matrix(-alg.ad_m(u)));
}

SymOp canonical_curvature(const ReductiveAlgebra& alg, const Vector& u) {
  require_m_vector(alg, u, "canonical_curvature");
  require_orthonormal(alg, "canonical_curvature");
  return SymOp(alg.canonical_curvature_matrix(u));
}

SkewOp s_operator(const ReductiveAlgebra& alg, const Vector& u) {
  require_m_vector(alg, u, "s_operator");
  require_orthonormal(alg, "s_operator");
  return SkewOp(Matrix(0.5 * alg.ad_m(u)));
}

SymOp riemann_jacobi_operator(const ReductiveAlgebra& alg, const Vector& u) {
  require_m_vector(alg, u, "riemann_jacobi_operator");
  const double norm2 = u.dot(alg.metric() * u);
  if (std::abs(norm2 - 1.0) > kUnitTol) {
    throw DomainError("riemann_jacobi_operator: u must be a unit vector (|u|^2 = " + std::to_string(norm2) + ")");
  }
  const SymOp rtilde = canonical_curvature(alg, u);
  const SkewOp s = s_operator(alg, u);
  return rtilde - s.squared();
}

EndOp full_curvature(const ReductiveAlgebra& alg, const Vector& x, const Vector& y) {
  require_m_vector(alg, x, "full_curvature");
  require_m_vector(alg, y, "full_curvature");
  const int n = alg.dim_m();
  Matrix rtilde = Matrix::Zero(n, n);
  const Vector c = alg.bracket_k(x, y);
  for (int a = 0; a < alg.dim_k(); ++a) {
    if (c(a) != 0.0) rtilde += c(a) * alg.ad_k_generator(a);
  }
  const Matrix sx = 0.5 * alg.ad_m(x);
  const Matrix sy = 0.5 * alg.ad_m(y);
  const Vector sxy = sx * y;
  const Matrix s_sxy = 0.5 * alg.ad_m(sxy);
  return EndOp(Matrix(rtilde - (sx * sy - sy * sx) + 2.0 * s_sxy));
}

namespace {

// B_r(v, w) split as (r-independent part, coefficient of r).
std::pair<double, double> split_form(const ReductiveAlgebra& alg, const Vector& v, const Vector& w) {
  const int n = alg.dim_m();
  const double base = v.head(n).dot(alg.metric() * w.head(n));
  const double coeff = v.tail(alg.dim_k()).dot(w.tail(alg.dim_k()));
  return {base, coeff};
}

template <typename Visit>
void for_each_invariance_term(const ReductiveAlgebra& alg, Visit&& visit) {
  const int total = alg.dim_m() + alg.dim_k();
  for (int i = 0; i < total; ++i) {
    const Vector x = basis_vector(total, i);
    for (int j = 0; j < total; ++j) {
      const Vector y = basis_vector(total, j);
      const Vector xy = alg.bracket(x, y);
      for (int k = 0; k < total; ++k) {
        const Vector z = basis_vector(total, k);
        const Vector xz = alg.bracket(x, z);
        const auto [a1, b1] = split_form(alg, xy, z);
        const auto [a2, b2] = split_form(alg, xz, y);
        visit(a1 + a2, b1 + b2);
      }
    }
  }
}

}  // namespace

double BiInvariantCandidate::violation() const {
  if (base == nullptr) {
    throw DomainError("BiInvariantCandidate: no base algebra");
  }
  double worst = 0.0;
  const double r_value = r;
  for_each_invariance_term(*base, [&](double a, double b) { worst = std::max(worst, std::abs(a + r_value * b)); });
  return worst;
}

BiInvariantExtension bi_invariant_extension(const ReductiveAlgebra& alg) {
  if (alg.dim_k() != 1) {
    throw DomainError("bi_invariant_extension: requires dim_k = 1");
  }
  double sum_ab = 0.0;
  double sum_bb = 0.0;
  double max_a = 0.0;
  for_each_invariance_term(alg, [&](double a, double b) {
    sum_ab += a * b;
    sum_bb += b * b;
    max_a = std::max(max_a, std::abs(a));
  });

  BiInvariantExtension out;
  if (sum_bb == 0.0) {
    // The condition does not involve r at all.
    out.residual = max_a;
    if (max_a <= kBiInvariantTol) {
      out.indeterminate = true;
      out.r = 1.0;
      out.least_squares_r = 1.0;
    }
    return out;
  }
  const double r = -sum_ab / sum_bb;
  out.least_squares_r = r;
  out.residual = BiInvariantCandidate{r, &alg}.violation();
  if (out.residual <= kBiInvariantTol && r > 0.0) {
    out.r = r;
  }
  return out;
}

}  // namespace natred
