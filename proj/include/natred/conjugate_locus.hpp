#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "natred/m3_geometry.hpp"

namespace natred {

/// f_theta(s) = 1 - cos s - mu(theta) s sin s; its positive zeros are the conjugate
/// values s = t sqrt(lambda(theta)).
double f_theta(const M3Params& p, double theta, double s);

/// Pole-free form sin(s/2) - mu s cos(s/2) of tan(s/2) = mu s.
double branch_residual(double mu, double s);

/// Root of tan(s/2) = mu s in ((2p+1) pi, 2(p+1) pi) for mu < 0 or in
/// (2p pi, (2p+1) pi) for mu > 0, by bisection to full double precision.
/// Returns none for mu == 0. Throws DomainError for p < 0 or p == 0 with mu > 0.
std::optional<double> branch_equation_root(double mu, int p);

/// s_p(theta): branch_equation_root at mu(theta); none when lambda(theta) <= 0 or mu == 0.
std::optional<double> branch_root(const M3Params& params, double theta, int p);

enum class ConjugateKind { IsotropicLattice, NonIsotropicBranch, HopfFiber };
std::string to_string(ConjugateKind k);

struct ConjugatePoint {
  double t;
  double s;
  ConjugateKind kind;
  int p;
  int multiplicity;
  bool isotropic;
};

/// Conjugate points to o along the geodesic with direction d, for 0 < t <= t_max,
/// in increasing t. Each point is checked against the solution matrix (its
/// determinant vanishes) and its multiplicity is 3 - rank of that matrix.
std::vector<ConjugatePoint> conjugate_points(const M3Params& params, const Direction& d, double t_max);

/// First conjugate value along u(theta); +infinity when there is none.
double conjugate_radius(const M3Params& params, double theta);
/// Infimum of conjugate_radius over theta.
double global_conjugate_radius(const M3Params& params);

enum class GeodesicClass { Isotropic, HasNonIsotropicConjugates, HopfFiber };
std::string to_string(GeodesicClass g);

GeodesicClass classify_geodesic(const M3Params& params, double theta);

/// (length / 2 pi)(tau^2 - kappa) cos(theta) for a closed geodesic of the given
/// length on a Berger sphere. The geodesic is closed iff this is rational.
/// Throws DomainError off Berger spheres, for theta outside (0, pi), or when the
/// length is not a positive integer multiple of 2 pi / sqrt(lambda) within 1e-9.
double closed_geodesic_invariant(const M3Params& params, double theta, double length);

/// Exact rational number with 64-bit numerator and positive denominator.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
};

/// Decides closedness for exact rational kappa > 0, tau > 0 and cos(theta) in (-1, 1):
/// closed iff (tau^2 - kappa) cos(theta) = 0 or lambda(theta) is the square of a
/// rational. Throws DomainError on invalid input or 64-bit overflow.
bool geodesic_closed_exact(Rational kappa, Rational tau, Rational cos_theta);

enum class LocusFamily { S1, S2 };
std::string to_string(LocusFamily f);

/// Samples s u(theta, phi) / sqrt(lambda(theta)) over a theta x phi grid.
struct LocusSurface {
  LocusFamily family;
  int p;
  std::vector<double> theta;
  std::vector<double> phi;
  std::vector<double> s;                            ///< generating zero per theta row
  std::vector<std::vector<Eigen::Vector3d>> points;  ///< [theta index][phi index]
};

/// S1: s = 2 p pi, p >= 1. S2: s = s_p(theta), p >= 0, p = 0 only when kappa > tau^2;
/// at theta in {0, pi} the continuous extension 2 p pi (kappa < tau^2) or
/// 2 (p + 1) pi (kappa > tau^2) is used. Throws DomainError if some theta has
/// lambda <= 0 or a grid is empty.
LocusSurface sample_locus(const M3Params& params, LocusFamily family, int p, const std::vector<double>& theta_grid,
                          const std::vector<double>& phi_grid);

/// Membership in the isotropic conjugate locus: kappa (x^2 + y^2) + tau^2 z^2 = (2 p pi)^2
/// for some p >= 1 with relative residual at most tol, excluding the poles
/// (0, 0, +-2 p pi / tau) within relative distance tol.
bool isotropic_locus_membership(const M3Params& params, const Eigen::Vector3d& point, double tol = 1e-9);

}  // namespace natred
