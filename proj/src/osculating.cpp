#include "natred/osculating.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "natred/errors.hpp"

namespace natred {

OperatorCurve::OperatorCurve(SymOp base, SkewOp generator)
    : base_(std::move(base)), generator_(std::move(generator)) {
  if (base_.dim() != generator_.dim()) {
    throw DomainError("OperatorCurve: base and generator dimensions differ");
  }
  const int n = base_.dim();
  const int orders = std::max(1, n * (n - 1) / 2);
  derivatives_.reserve(orders);
  SymOp d = base_;
  for (int i = 0; i < orders; ++i) {
    d = derivation_action(generator_, d);
    derivatives_.push_back(d);
  }
}

OperatorCurve make_jacobi_curve(const ReductiveAlgebra& alg, const Vector& u) {
  return OperatorCurve(riemann_jacobi_operator(alg, u), s_operator(alg, u));
}

OperatorCurve make_jacobi_curve(const M3Params& p, const Direction& d) {
  auto data = operator_data(p, d);
  return OperatorCurve(data.r, data.s);
}

SymOp curve_at(const OperatorCurve& c, double t) {
  if (t == 0.0) return c.base();
  return adjoint_action(mat_exp(c.generator(), t), c.base());
}

SymOp derivative_at_zero(const OperatorCurve& c, int i) {
  if (i < 1) throw DomainError("derivative order must be >= 1");
  if (i <= c.max_order()) return c.derivatives()[i - 1];
  SymOp d = c.derivatives().back();
  for (int k = c.max_order(); k < i; ++k) d = derivation_action(c.generator(), d);
  return d;
}

SymOp tilde_curve_at(const OperatorCurve& c, double t) { return curve_at(c, t) + c.generator().squared(); }

int osculating_rank(const OperatorCurve& c, double tol) {
  if (!(tol > 0.0)) throw DomainError("rank tolerance must be positive");
  const double s2 = 2.0 * c.generator().matrix().norm();
  double term = c.base().matrix().norm();
  double floor = 0.0;
  for (int i = 0; i < c.max_order(); ++i) {
    term *= s2;
    floor += term * term;
  }
  return numerical_rank(c.derivatives(), tol, tol * floor);
}

double curve_frequency(const OperatorCurve& c) {
  const SymOp d1 = derivative_at_zero(c, 1);
  const SymOp d3 = derivative_at_zero(c, 3);
  const double n1 = frobenius_inner(d1, d1);
  if (n1 == 0.0) throw DomainError("curve is constant; no frequency");

  // Adjoint frequencies are differences of the generator's eigenfrequencies.
  Eigen::SelfAdjointEigenSolver<Matrix> es(c.generator().squared().matrix(), Eigen::EigenvaluesOnly);
  std::vector<double> omega;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    omega.push_back(std::sqrt(std::max(0.0, -es.eigenvalues()(i))));
  }
  double best_nu = 0.0;
  double best_res = INFINITY;
  for (double a : omega) {
    for (double b : omega) {
      for (double nu : {std::abs(a - b), a + b}) {
        if (nu <= 0.0) continue;
        const double res = (d3.matrix() + nu * nu * d1.matrix()).norm() / std::sqrt(n1);
        if (res < best_res) {
          best_res = res;
          best_nu = nu;
        }
      }
    }
  }
  if (best_nu > 0.0 && best_res <= 1e-8 * best_nu * best_nu) return best_nu;

  const double nu2 = -frobenius_inner(d3, d1) / n1;
  if (!(nu2 > 0.0)) throw ComputationError("curve has no positive frequency");
  return std::sqrt(nu2);
}

CircleFit fit_circle(const OperatorCurve& c, int samples) {
  if (samples < 8) throw DomainError("fit_circle needs at least 8 samples");
  if (osculating_rank(c) != 2) throw DomainError("curve has osculating rank != 2; not a circle");
  const double nu = curve_frequency(c);
  const double period = 2.0 * std::numbers::pi / nu;

  std::vector<Matrix> pts;
  pts.reserve(samples);
  Matrix mean = Matrix::Zero(c.base().dim(), c.base().dim());
  for (int k = 0; k < samples; ++k) {
    pts.push_back(curve_at(c, period * k / samples).matrix());
    mean += pts.back();
  }
  mean /= samples;
  std::vector<double> dist;
  double radius = 0.0;
  for (const auto& p : pts) {
    dist.push_back((p - mean).norm());
    radius += dist.back();
  }
  radius /= samples;
  double spread = 0.0;
  for (double d : dist) spread = std::max(spread, std::abs(d - radius) / radius);
  if (spread > 1e-8) {
    throw ComputationError("curve samples are not concyclic (relative spread " + std::to_string(spread) + ")");
  }
  return {SymOp(mean), radius, period, spread};
}

}  // namespace natred
