#pragma once

#include <array>
#include <optional>
#include <string>

#include "natred/operator_space.hpp"
#include "natred/reductive_core.hpp"

namespace natred {

/// Parameters (kappa, tau) of the model space M^3(kappa, tau): a Riemannian
/// submersion over M^2(kappa) with bundle curvature tau.
class M3Params {
 public:
  /// Throws DomainError unless tau > 0 and kappa != tau^2 (exact comparison).
  M3Params(double kappa, double tau);

  double kappa() const { return kappa_; }
  double tau() const { return tau_; }
  /// tau^2 - kappa.
  double gap() const { return tau_ * tau_ - kappa_; }

 private:
  double kappa_;
  double tau_;
};

enum class SpaceType { BergerSphere, SL2Cover, Heisenberg };

SpaceType space_type(const M3Params& p);
std::string to_string(SpaceType t);

/// Unit direction u(theta, phi) = sin(theta) cos(phi) e1 + sin(theta) sin(phi) e2 + cos(theta) e3.
/// theta is the slope angle against the Hopf field e3.
class Direction {
 public:
  /// Throws DomainError unless theta in [0, pi] and phi in [0, 2 pi).
  explicit Direction(double theta, double phi = 0.0);

  double theta() const { return theta_; }
  double phi() const { return phi_; }
  /// theta is exactly 0 or pi.
  bool is_hopf() const;

 private:
  double theta_;
  double phi_;
};

/// sin and cos of theta, exact at theta in {0, pi/2, pi}.
struct SinCos {
  double s;
  double c;
};
SinCos theta_trig(double theta);

struct ThetaInvariants {
  double lambda;  ///< kappa sin^2 + tau^2 cos^2
  double mu;      ///< (tau^2 - kappa) sin^2 / (2 tau^2)
};

ThetaInvariants theta_invariants(const M3Params& p, double theta);

struct ScalarInvariants {
  double xi_sectional;                 ///< c^2 = tau^2 / 4
  std::array<double, 3> ricci;         ///< (kappa - tau^2/2, kappa - tau^2/2, tau^2/2)
  SpaceType type;
  std::optional<double> fiber_length;  ///< 4 pi tau / kappa on Berger spheres
};

ScalarInvariants scalar_invariants(const M3Params& p);

/// Algebra with basis e1, e2, e3 of m and A12 of k:
///   [e1,e2] = tau e3 + (kappa - tau^2) A12, [e1,e3] = -tau e2, [e2,e3] = tau e1,
///   [A12,e1] = e2, [A12,e2] = -e1, [A12,e3] = 0, Euclidean metric.
ReductiveAlgebra build_algebra(const M3Params& p);
/// Same tables without the kappa != tau^2 restriction.
ReductiveAlgebra build_algebra_raw(double kappa, double tau);

Vector direction_vector(const Direction& d);
/// e^{phi A12}: rotation by phi in the (e1, e2) plane.
Matrix rotation_a12(double phi);
/// Generator of e^{phi A12} as a skew operator.
SkewOp a12_generator();

/// Orthonormal frame v1, v2, v3 of the Jacobi operator curve's affine plane.
/// Throws DomainError for theta outside the open interval (0, pi).
std::array<SymOp, 3> frame_v(double theta);

struct OperatorData {
  SkewOp s;
  SymOp rtilde;
  SymOp r;
};

/// Explicit S_u, Rtilde_u and R_u = Rtilde_u - S_u^2 at u(theta, phi),
/// built at phi = 0 and conjugated by e^{phi A12}.
OperatorData operator_data(const M3Params& p, const Direction& d);

}  // namespace natred
