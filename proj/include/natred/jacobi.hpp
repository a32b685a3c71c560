#pragma once

#include <array>
#include <optional>
#include <vector>

#include "natred/m3_geometry.hpp"
#include "natred/operator_space.hpp"
#include "natred/reductive_core.hpp"

namespace natred {

enum class JacobiBranch { HopfFiber, LambdaPositive, LambdaZero, LambdaNegative };

std::string to_string(JacobiBranch b);

/// Jacobi field X along the geodesic through o with direction u(theta, phi),
/// X(0) = 0 and X'(0) = initial_derivative.
///
/// The coefficient triple depends on the branch. With (w1, w2, w3) the initial
/// derivative rotated back to phi = 0, beta = -tau (cos(theta) w1 - sin(theta) w3),
/// s = sqrt(|lambda|) and c = cos(theta), sg = tau cos(theta):
///   HopfFiber:      X = (A(1-cos sg t) - B sin sg t, A sin sg t + B(1-cos sg t), C t),
///                   A = w2/sg, B = -w1/sg, C = w3.
///   LambdaPositive: trigonometric form, A = w2, B = beta/s, and C = B + w1 s/(tau c)
///                   off the equator, C = w1 on it.
///   LambdaNegative: hyperbolic form, A = w2, B = beta, and C = B + w1 lambda/(tau c)
///                   off the equator, C = w1 on it.
///   LambdaZero:     polynomial form, A = w2, B = beta, C = w1.
struct JacobiSolution {
  M3Params params;
  Direction direction;
  Vector initial_derivative;
  JacobiBranch branch;
  std::array<double, 3> coefficients;
  double lambda;  ///< lambda(theta); exactly 0 on the LambdaZero branch
};

/// |lambda| below this routes to the polynomial branch.
inline constexpr double kLambdaZeroThreshold = 1e-9;

JacobiSolution solve_closed_form(const M3Params& p, const Direction& d, const Vector& xprime0);

/// X(t).
Vector evaluate(const JacobiSolution& sol, double t);
/// X'(t).
Vector evaluate_derivative(const JacobiSolution& sol, double t);

struct Trajectory {
  std::vector<double> t;
  std::vector<Vector> x;
};

/// Classical RK4 for X'' = Ttilde_u X' - Rtilde_u X with X(0) = 0, X'(0) = xprime0,
/// on any reductive algebra. Samples at multiples of step; the final step is
/// shortened to land on t_end. Throws ComputationError on a non-finite state.
Trajectory integrate_numeric(const ReductiveAlgebra& alg, const Vector& u, const Vector& xprime0, double t_end,
                             double step = 1e-3);

struct IsotropyVerdict {
  bool is_isotropic = false;
  std::optional<double> killing_coefficient;
};

/// X'(0) is isotropic iff it is a multiple a [A12, u] = a e^{phi A12}(sin(theta) e2).
/// Collinearity is tested by an angle below 1e-10.
IsotropyVerdict isotropy_test(const M3Params& p, const Direction& d, const Vector& xprime0);

/// Columns are X(t) for X'(0) = e1, e2, e3.
EndOp solution_matrix(const M3Params& p, const Direction& d, double t);

/// det(solution_matrix(t)) from the factorization M = U B U^T with U orthogonal:
/// det = t (t Sn + tau^2 (2 Cs - t Sn) / lambda), Sn = sin(sqrt(lambda) t)/sqrt(lambda),
/// Cs = (1 - cos(sqrt(lambda) t))/lambda, evaluated without cancellation. For lambda < 0
/// the entries of M grow like e^{sqrt(-lambda) t} while the determinant is only
/// O(t e^{sqrt(-lambda) t}), so the determinant of the evaluated matrix loses all
/// significant digits once sqrt(-lambda) t exceeds about 36.
double solution_determinant(const M3Params& p, const Direction& d, double t);

/// Orthonormal basis (columns) of the right null space of solution_matrix(t):
/// singular values at most tol times the largest.
Matrix solution_kernel(const M3Params& p, const Direction& d, double t, double tol = 1e-9);

/// Dimension of span{[A_a, u]}, the isotropic initial derivatives.
int isotropic_dimension(const ReductiveAlgebra& alg, const Vector& u);

}  // namespace natred
