#pragma once

#include <vector>

#include "natred/m3_geometry.hpp"
#include "natred/operator_space.hpp"
#include "natred/reductive_core.hpp"

namespace natred {

/// The parallel-translated Jacobi operator curve t -> R_u(t) = Ad_{e^{t S_u}} R_u
/// together with its derivatives S_u^i . R_u at t = 0.
class OperatorCurve {
 public:
  OperatorCurve(SymOp base, SkewOp generator);

  const SymOp& base() const { return base_; }
  const SkewOp& generator() const { return generator_; }
  /// Orders cached at construction: n(n-1)/2.
  int max_order() const { return static_cast<int>(derivatives_.size()); }
  /// Cached derivatives 1..max_order().
  const std::vector<SymOp>& derivatives() const { return derivatives_; }

 private:
  SymOp base_;
  SkewOp generator_;
  std::vector<SymOp> derivatives_;
};

/// Curve for a unit u of a naturally reductive algebra with orthonormal m-basis.
OperatorCurve make_jacobi_curve(const ReductiveAlgebra& alg, const Vector& u);
/// Curve for u(theta, phi) in M^3(kappa, tau), from the explicit matrices.
OperatorCurve make_jacobi_curve(const M3Params& p, const Direction& d);

SymOp curve_at(const OperatorCurve& c, double t);
/// i-th derivative at 0, i >= 1; orders beyond the cache are computed on demand.
SymOp derivative_at_zero(const OperatorCurve& c, int i);
/// Rtilde_u(t) = R_u(t) + S_u^2.
SymOp tilde_curve_at(const OperatorCurve& c, double t);

/// Number of linearly independent derivatives among orders 1..n(n-1)/2.
///
/// Singular values of the Gram matrix are compared with tol times the larger of
/// the top singular value and tol * sum_i ((2 |S|_F)^i |R|_F)^2, the squared a
/// priori size of the derivatives. The floor keeps rounding noise in an
/// identically zero derivative list from being counted as rank while still
/// resolving derivatives down to about sqrt(tol) of their a priori size.
int osculating_rank(const OperatorCurve& c, double tol = 1e-9);

struct CircleFit {
  SymOp center;
  double radius;
  double period;
  double spread;  ///< max |distance - radius| / radius over the samples
};

/// Samples one period of a rank-2 curve and fits center (sample mean) and radius
/// (mean distance). Throws DomainError when the rank is not 2 or samples < 8, and
/// ComputationError when the samples are not concyclic to 1e-8.
CircleFit fit_circle(const OperatorCurve& c, int samples = 64);

/// Angular frequency nu of a rank-2 curve: D3 = -nu^2 D1.
double curve_frequency(const OperatorCurve& c);

}  // namespace natred
