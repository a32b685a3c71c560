#include "natred/conjugate_locus.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "natred/errors.hpp"
#include "natred/jacobi.hpp"

namespace natred {

using std::numbers::pi;

double f_theta(const M3Params& p, double theta, double s) {
  const double mu = theta_invariants(p, theta).mu;
  return 1.0 - std::cos(s) - mu * s * std::sin(s);
}

double branch_residual(double mu, double s) { return std::sin(s / 2.0) - mu * s * std::cos(s / 2.0); }

std::optional<double> branch_equation_root(double mu, int p) {
  if (!std::isfinite(mu)) throw DomainError("mu must be finite");
  if (p < 0) throw DomainError("branch index must be nonnegative");
  if (mu == 0.0) return std::nullopt;
  if (p == 0 && mu > 0.0) throw DomainError("branch p = 0 exists only for mu < 0");

  double lo = mu > 0.0 ? 2.0 * p * pi : (2.0 * p + 1.0) * pi;
  double hi = lo + pi;
  double glo = branch_residual(mu, lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double gm = branch_residual(mu, mid);
    if (gm == 0.0) return mid;
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  const double ghi = branch_residual(mu, hi);
  return std::abs(glo) <= std::abs(ghi) ? lo : hi;
}

std::optional<double> branch_root(const M3Params& params, double theta, int p) {
  const auto inv = theta_invariants(params, theta);
  if (!(inv.lambda > 0.0)) return std::nullopt;
  return branch_equation_root(inv.mu, p);
}

std::string to_string(ConjugateKind k) {
  switch (k) {
    case ConjugateKind::IsotropicLattice:
      return "IsotropicLattice";
    case ConjugateKind::NonIsotropicBranch:
      return "NonIsotropicBranch";
    case ConjugateKind::HopfFiber:
      return "HopfFiber";
  }
  return "unknown";
}

namespace {

int verified_multiplicity(const M3Params& params, const Direction& d, double t) {
  const Matrix m = solution_matrix(params, d, t).matrix();
  Eigen::JacobiSVD<Matrix> svd(m);
  const double smax = svd.singularValues()(0);
  const double det = m.determinant();
  if (std::abs(det) > 1e-8 * std::max(1.0, smax * smax * smax)) {
    throw ComputationError("solution matrix is not singular at t = " + std::to_string(t));
  }
  return 3 - matrix_rank(m, 1e-9);
}

}  // namespace

std::vector<ConjugatePoint> conjugate_points(const M3Params& params, const Direction& d, double t_max) {
  if (!(t_max > 0.0)) throw DomainError("t_max must be positive");
  std::vector<ConjugatePoint> out;
  if (d.is_hopf()) {
    const double tau = params.tau();
    for (int p = 1; 2.0 * p * pi / tau <= t_max; ++p) {
      const double t = 2.0 * p * pi / tau;
      out.push_back({t, 2.0 * p * pi, ConjugateKind::HopfFiber, p, verified_multiplicity(params, d, t), false});
    }
    return out;
  }
  const auto inv = theta_invariants(params, d.theta());
  if (inv.lambda < kLambdaZeroThreshold) return out;
  const double r = std::sqrt(inv.lambda);

  for (int p = 1; 2.0 * p * pi / r <= t_max; ++p) {
    const double t = 2.0 * p * pi / r;
    out.push_back({t, 2.0 * p * pi, ConjugateKind::IsotropicLattice, p, verified_multiplicity(params, d, t), true});
  }
  for (int p = inv.mu < 0.0 ? 0 : 1; (inv.mu < 0.0 ? 2.0 * p + 1.0 : 2.0 * p) * pi / r <= t_max; ++p) {
    const auto s = branch_equation_root(inv.mu, p);
    if (!s) break;
    if (std::abs(*s - 2.0 * p * pi) < 1e-10) continue;
    const double t = *s / r;
    if (t > t_max) break;
    out.push_back({t, *s, ConjugateKind::NonIsotropicBranch, p, verified_multiplicity(params, d, t), false});
  }
  std::sort(out.begin(), out.end(), [](const ConjugatePoint& a, const ConjugatePoint& b) { return a.t < b.t; });
  return out;
}

double conjugate_radius(const M3Params& params, double theta) {
  if (theta == 0.0 || theta == pi) return 2.0 * pi / params.tau();
  const auto inv = theta_invariants(params, theta);
  if (inv.lambda < kLambdaZeroThreshold) return std::numeric_limits<double>::infinity();
  const double r = std::sqrt(inv.lambda);
  if (params.gap() > 0.0) return 2.0 * pi / r;
  return *branch_equation_root(inv.mu, 0) / r;
}

double global_conjugate_radius(const M3Params& params) {
  if (params.gap() > 0.0) return 2.0 * pi / params.tau();
  return conjugate_radius(params, pi / 2);
}

std::string to_string(GeodesicClass g) {
  switch (g) {
    case GeodesicClass::Isotropic:
      return "Isotropic";
    case GeodesicClass::HasNonIsotropicConjugates:
      return "HasNonIsotropicConjugates";
    case GeodesicClass::HopfFiber:
      return "HopfFiber";
  }
  return "unknown";
}

GeodesicClass classify_geodesic(const M3Params& params, double theta) {
  if (theta == 0.0 || theta == pi) return GeodesicClass::HopfFiber;
  if (theta_invariants(params, theta).lambda < kLambdaZeroThreshold) return GeodesicClass::Isotropic;
  return GeodesicClass::HasNonIsotropicConjugates;
}

double closed_geodesic_invariant(const M3Params& params, double theta, double length) {
  if (space_type(params) != SpaceType::BergerSphere) {
    throw DomainError("closed geodesic invariant is defined on Berger spheres only");
  }
  if (!(theta > 0.0 && theta < pi)) throw DomainError("theta must lie in (0, pi)");
  if (!(length > 0.0) || !std::isfinite(length)) throw DomainError("length must be positive");
  const auto inv = theta_invariants(params, theta);
  const double m = length * std::sqrt(inv.lambda) / (2.0 * pi);
  const double k = std::round(m);
  if (k < 1.0 || std::abs(m - k) > 1e-9 * std::max(1.0, m)) {
    throw DomainError("length is not an integer multiple of 2 pi / sqrt(lambda)");
  }
  return length / (2.0 * pi) * params.gap() * theta_trig(theta).c;
}

namespace {

__extension__ typedef __int128 i128;

struct Exact {
  i128 num;
  i128 den;
};

i128 iabs(i128 v) { return v < 0 ? -v : v; }

i128 igcd(i128 a, i128 b) {
  a = iabs(a);
  b = iabs(b);
  while (b != 0) {
    const i128 r = a % b;
    a = b;
    b = r;
  }
  return a;
}

constexpr i128 kLimit = static_cast<i128>(1) << 100;

Exact normalize(i128 num, i128 den) {
  if (den == 0) throw DomainError("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const i128 g = igcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (iabs(num) > kLimit || den > kLimit) throw DomainError("rational arithmetic overflow");
  return {num, den};
}

Exact from(Rational r) { return normalize(r.num, r.den); }
Exact mul(Exact a, Exact b) {
  const Exact x = normalize(a.num, b.den);
  const Exact y = normalize(b.num, a.den);
  return normalize(x.num * y.num, x.den * y.den);
}
Exact add(Exact a, Exact b) {
  const i128 g = igcd(a.den, b.den);
  const i128 da = a.den / g;
  return normalize(a.num * (b.den / g) + b.num * da, da * b.den);
}
Exact neg(Exact a) { return {-a.num, a.den}; }

bool is_square(i128 v) {
  if (v < 0) return false;
  i128 r = static_cast<i128>(std::sqrt(static_cast<long double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r * r == v;
}

}  // namespace

bool geodesic_closed_exact(Rational kappa, Rational tau, Rational cos_theta) {
  const Exact k = from(kappa);
  const Exact t = from(tau);
  const Exact c = from(cos_theta);
  if (k.num <= 0) throw DomainError("exact closedness needs kappa > 0");
  if (t.num <= 0) throw DomainError("tau must be positive");
  if (!(iabs(c.num) < c.den)) throw DomainError("cos(theta) must lie in (-1, 1)");
  const Exact t2 = mul(t, t);
  if (t2.num == k.num && t2.den == k.den) throw DomainError("kappa must differ from tau^2");
  const Exact c2 = mul(c, c);
  const Exact invariant = mul(add(t2, neg(k)), c);
  if (invariant.num == 0) return true;
  const Exact lambda = add(mul(k, add({1, 1}, neg(c2))), mul(t2, c2));
  return is_square(lambda.num) && is_square(lambda.den);
}

std::string to_string(LocusFamily f) { return f == LocusFamily::S1 ? "S1" : "S2"; }

LocusSurface sample_locus(const M3Params& params, LocusFamily family, int p, const std::vector<double>& theta_grid,
                          const std::vector<double>& phi_grid) {
  if (theta_grid.empty() || phi_grid.empty()) throw DomainError("locus grids must be nonempty");
  if (family == LocusFamily::S1 && p < 1) throw DomainError("S1 needs p >= 1");
  if (family == LocusFamily::S2) {
    if (p < 0) throw DomainError("S2 needs p >= 0");
    if (p == 0 && params.gap() > 0.0) throw DomainError("S2 with p = 0 exists only for kappa > tau^2");
  }
  LocusSurface out{family, p, theta_grid, phi_grid, {}, {}};
  for (double theta : theta_grid) {
    const auto inv = theta_invariants(params, theta);
    if (!(inv.lambda > 0.0)) {
      throw DomainError("theta = " + std::to_string(theta) + " has lambda <= 0; no conjugate locus there");
    }
    double s = 2.0 * p * pi;
    if (family == LocusFamily::S2) {
      if (theta == 0.0 || theta == pi) {
        s = params.gap() > 0.0 ? 2.0 * p * pi : 2.0 * (p + 1) * pi;
      } else {
        const auto root = branch_equation_root(inv.mu, p);
        if (!root) throw ComputationError("no branch root at theta = " + std::to_string(theta));
        s = *root;
      }
    }
    const double scale = s / std::sqrt(inv.lambda);
    std::vector<Eigen::Vector3d> row;
    row.reserve(phi_grid.size());
    for (double phi : phi_grid) {
      row.push_back(scale * Eigen::Vector3d(direction_vector(Direction(theta, phi))));
    }
    out.s.push_back(s);
    out.points.push_back(std::move(row));
  }
  return out;
}

bool isotropic_locus_membership(const M3Params& params, const Eigen::Vector3d& point, double tol) {
  const double k = params.kappa();
  const double t2 = params.tau() * params.tau();
  const double q = k * (point.x() * point.x() + point.y() * point.y()) + t2 * point.z() * point.z();
  if (!(q > 0.0)) return false;
  const double p = std::round(std::sqrt(q) / (2.0 * pi));
  if (p < 1.0) return false;
  const double target = 4.0 * p * p * pi * pi;
  if (std::abs(q - target) > tol * target) return false;
  const double zpole = 2.0 * p * pi / params.tau();
  for (double sign : {1.0, -1.0}) {
    if ((point - Eigen::Vector3d(0.0, 0.0, sign * zpole)).norm() <= tol * zpole) return false;
  }
  return true;
}

}  // namespace natred
