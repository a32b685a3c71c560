#include "natred/jacobi.hpp"

#include <Eigen/Geometry>
#include <Eigen/SVD>

#include <cmath>

#include "natred/errors.hpp"

namespace natred {

namespace {

// Kernels of Y'' + lambda Y = 0 integrated from 0:
//   cc = cos(sqrt(lambda) t), sn = int cc, cs = int sn, q = int cs.
struct Kernels {
  double cc, sn, cs, q;
};

Kernels kernels(double lambda, double t) {
  const double x = lambda * t * t;
  if (std::abs(x) <= 1.0) {
    // Power series in -lambda t^2; 25 terms reach double precision for |x| <= 1.
    double sn = 0.0, cs = 0.0, q = 0.0;
    double term = t;  // (-lambda)^k t^{2k+1} / (2k+1)!
    for (int k = 0; k < 25; ++k) {
      sn += term;
      const double t2 = term * t / (2 * k + 2);
      cs += t2;
      q += t2 * t / (2 * k + 3);
      term = -t2 * lambda * t / (2 * k + 3);
    }
    return {1.0 - lambda * cs, sn, cs, q};
  }
  if (lambda > 0.0) {
    const double w = std::sqrt(lambda);
    const double h = std::sin(w * t / 2.0);
    const double sn = std::sin(w * t) / w;
    return {std::cos(w * t), sn, 2.0 * h * h / lambda, (t - sn) / lambda};
  }
  const double w = std::sqrt(-lambda);
  const double h = std::sinh(w * t / 2.0);
  const double sn = std::sinh(w * t) / w;
  return {std::cosh(w * t), sn, -2.0 * h * h / lambda, (t - sn) / lambda};
}

// Initial data in the phi = 0 frame.
Vector rotated_back(const JacobiSolution& sol) {
  if (sol.direction.phi() == 0.0) return sol.initial_derivative;
  return rotation_a12(sol.direction.phi()).transpose() * sol.initial_derivative;
}

Vector rotate_forward(const JacobiSolution& sol, Vector v) {
  if (sol.direction.phi() == 0.0) return v;
  return rotation_a12(sol.direction.phi()) * v;
}

}  // namespace

std::string to_string(JacobiBranch b) {
  switch (b) {
    case JacobiBranch::HopfFiber:
      return "HopfFiber";
    case JacobiBranch::LambdaPositive:
      return "LambdaPositive";
    case JacobiBranch::LambdaZero:
      return "LambdaZero";
    case JacobiBranch::LambdaNegative:
      return "LambdaNegative";
  }
  return "unknown";
}

JacobiSolution solve_closed_form(const M3Params& p, const Direction& d, const Vector& xprime0) {
  if (xprime0.size() != 3 || !xprime0.allFinite()) {
    throw DomainError("initial derivative must be a finite 3-vector");
  }
  JacobiSolution sol{p, d, xprime0, JacobiBranch::LambdaPositive, {0.0, 0.0, 0.0}, 0.0};
  const auto [s, c] = theta_trig(d.theta());
  const double tau = p.tau();
  const Vector w = rotated_back(sol);
  const double beta = -tau * (c * w(0) - s * w(2));
  const bool equator = c == 0.0;
  double lambda = theta_invariants(p, d.theta()).lambda;

  if (d.is_hopf()) {
    const double sg = tau * c;
    sol.branch = JacobiBranch::HopfFiber;
    sol.coefficients = {w(1) / sg, -w(0) / sg, w(2)};
  } else if (std::abs(lambda) < kLambdaZeroThreshold) {
    lambda = 0.0;
    sol.branch = JacobiBranch::LambdaZero;
    sol.coefficients = {w(1), beta, w(0)};
  } else if (lambda > 0.0) {
    const double r = std::sqrt(lambda);
    const double b = beta / r;
    sol.branch = JacobiBranch::LambdaPositive;
    sol.coefficients = {w(1), b, equator ? w(0) : b + w(0) * r / (tau * c)};
  } else {
    sol.branch = JacobiBranch::LambdaNegative;
    sol.coefficients = {w(1), beta, equator ? w(0) : beta + w(0) * lambda / (tau * c)};
  }
  sol.lambda = lambda;
  return sol;
}

// Y = X2' solves Y'' + lambda Y = 0 with Y(0) = w2, Y'(0) = beta; X1'' = tau c Y
// and X3'' = -tau s Y integrate it twice.
Vector evaluate(const JacobiSolution& sol, double t) {
  const auto [s, c] = theta_trig(sol.direction.theta());
  const double tau = sol.params.tau();
  const Vector w = rotated_back(sol);
  const double beta = -tau * (c * w(0) - s * w(2));
  const Kernels k = kernels(sol.lambda, t);
  const double iy = w(1) * k.cs + beta * k.q;  // double integral of Y
  Vector x(3);
  x << w(0) * t + tau * c * iy, w(1) * k.sn + beta * k.cs, w(2) * t - tau * s * iy;
  return rotate_forward(sol, x);
}

Vector evaluate_derivative(const JacobiSolution& sol, double t) {
  const auto [s, c] = theta_trig(sol.direction.theta());
  const double tau = sol.params.tau();
  const Vector w = rotated_back(sol);
  const double beta = -tau * (c * w(0) - s * w(2));
  const Kernels k = kernels(sol.lambda, t);
  const double y1 = w(1) * k.sn + beta * k.cs;  // integral of Y
  Vector x(3);
  x << w(0) + tau * c * y1, w(1) * k.cc + beta * k.sn, w(2) - tau * s * y1;
  return rotate_forward(sol, x);
}

Trajectory integrate_numeric(const ReductiveAlgebra& alg, const Vector& u, const Vector& xprime0, double t_end,
                             double step) {
  const int n = alg.dim_m();
  if (u.size() != n || xprime0.size() != n) throw DomainError("vector dimension does not match dim_m");
  if (!(step > 0.0) || !(t_end >= 0.0) || !std::isfinite(t_end)) {
    throw DomainError("need step > 0 and finite t_end >= 0");
  }
  const double unorm = u.dot(alg.metric() * u);
  if (std::abs(unorm - 1.0) > 1e-10) throw DomainError("u must be a unit vector");

  const Matrix ad = alg.ad_m(u);
  const Matrix rt = alg.canonical_curvature_matrix(u);
  auto accel = [&](const Vector& x, const Vector& v) -> Vector { return -ad * v - rt * x; };

  Trajectory out;
  Vector x = Vector::Zero(n);
  Vector v = xprime0;
  out.t.push_back(0.0);
  out.x.push_back(x);
  const long steps = static_cast<long>(std::ceil(t_end / step - 1e-9));
  for (long i = 0; i < steps; ++i) {
    const double t0 = i * step;
    const double h = std::min(step, t_end - t0);
    const Vector k1x = v;
    const Vector k1v = accel(x, v);
    const Vector k2x = v + 0.5 * h * k1v;
    const Vector k2v = accel(x + 0.5 * h * k1x, k2x);
    const Vector k3x = v + 0.5 * h * k2v;
    const Vector k3v = accel(x + 0.5 * h * k2x, k3x);
    const Vector k4x = v + h * k3v;
    const Vector k4v = accel(x + h * k3x, k4x);
    x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    if (!x.allFinite() || !v.allFinite()) {
      throw ComputationError("RK4 state became non-finite at t = " + std::to_string(t0 + h));
    }
    out.t.push_back(i + 1 == steps ? t_end : (i + 1) * step);
    out.x.push_back(x);
  }
  return out;
}

IsotropyVerdict isotropy_test(const M3Params& p, const Direction& d, const Vector& xprime0) {
  (void)p;
  if (xprime0.size() != 3 || !xprime0.allFinite()) throw DomainError("initial derivative must be a finite 3-vector");
  if (xprime0.isZero(0.0)) return {true, 0.0};
  const double s = theta_trig(d.theta()).s;
  if (s == 0.0) return {false, std::nullopt};
  Vector v(3);
  v << -s * std::sin(d.phi()), s * std::cos(d.phi()), 0.0;
  const Eigen::Vector3d a = xprime0;
  const Eigen::Vector3d b = v;
  const double sin_angle = a.cross(b).norm() / (a.norm() * b.norm());
  if (sin_angle >= 1e-10) return {false, std::nullopt};
  return {true, a.dot(b) / b.dot(b)};
}

EndOp solution_matrix(const M3Params& p, const Direction& d, double t) {
  Matrix m(3, 3);
  for (int j = 0; j < 3; ++j) {
    m.col(j) = evaluate(solve_closed_form(p, d, Vector::Unit(3, j)), t);
  }
  return EndOp(m);
}

double solution_determinant(const M3Params& p, const Direction& d, double t) {
  double lambda = theta_invariants(p, d.theta()).lambda;
  if (!d.is_hopf() && std::abs(lambda) < kLambdaZeroThreshold) lambda = 0.0;
  const Kernels k = kernels(lambda, t);
  // (2 Cs - t Sn) / lambda = sum_{j>=1} (-1)^{j+1} lambda^{j-1} t^{2j+2} 2j / (2j+2)!.
  double ratio = 0.0;
  if (std::abs(lambda * t * t) <= 1.0) {
    double term = t * t * t * t / 24.0;  // lambda^{j-1} t^{2j+2} / (2j+2)! with sign
    for (int j = 1; j < 26; ++j) {
      ratio += 2.0 * j * term;
      term *= -lambda * t * t / ((2.0 * j + 3.0) * (2.0 * j + 4.0));
    }
  } else {
    ratio = (2.0 * k.cs - t * k.sn) / lambda;
  }
  const double tau = p.tau();
  return t * (t * k.sn + tau * tau * ratio);
}

Matrix solution_kernel(const M3Params& p, const Direction& d, double t, double tol) {
  const Matrix m = solution_matrix(p, d, t).matrix();
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut = tol * sv(0);
  int r = 0;
  while (r < sv.size() && sv(r) > cut) ++r;
  return svd.matrixV().rightCols(3 - r);
}

int isotropic_dimension(const ReductiveAlgebra& alg, const Vector& u) {
  if (alg.dim_k() == 0) return 0;
  Matrix m(alg.dim_m(), alg.dim_k());
  for (int a = 0; a < alg.dim_k(); ++a) m.col(a) = alg.ad_k_generator(a) * u;
  if (m.isZero(0.0)) return 0;
  return matrix_rank(m);
}

}  // namespace natred
