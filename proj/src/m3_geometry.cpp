#include "natred/m3_geometry.hpp"

#include <cmath>
#include <numbers>

#include "natred/errors.hpp"

namespace natred {

using std::numbers::pi;

M3Params::M3Params(double kappa, double tau) : kappa_(kappa), tau_(tau) {
  if (!std::isfinite(kappa) || !std::isfinite(tau)) {
    throw DomainError("kappa and tau must be finite");
  }
  if (!(tau > 0.0)) {
    throw DomainError("tau must be positive");
  }
  if (kappa == tau * tau) {
    throw DomainError("kappa must differ from tau^2");
  }
}

SpaceType space_type(const M3Params& p) {
  if (p.kappa() > 0.0) return SpaceType::BergerSphere;
  if (p.kappa() < 0.0) return SpaceType::SL2Cover;
  return SpaceType::Heisenberg;
}

std::string to_string(SpaceType t) {
  switch (t) {
    case SpaceType::BergerSphere:
      return "BergerSphere";
    case SpaceType::SL2Cover:
      return "SL2Cover";
    case SpaceType::Heisenberg:
      return "Heisenberg";
  }
  return "unknown";
}

Direction::Direction(double theta, double phi) : theta_(theta), phi_(phi) {
  if (!std::isfinite(theta) || theta < 0.0 || theta > pi) {
    throw DomainError("theta must lie in [0, pi]");
  }
  if (!std::isfinite(phi) || phi < 0.0 || phi >= 2.0 * pi) {
    throw DomainError("phi must lie in [0, 2 pi)");
  }
}

bool Direction::is_hopf() const { return theta_ == 0.0 || theta_ == pi; }

SinCos theta_trig(double theta) {
  if (theta == 0.0) return {0.0, 1.0};
  if (theta == pi) return {0.0, -1.0};
  if (theta == pi / 2) return {1.0, 0.0};
  return {std::sin(theta), std::cos(theta)};
}

ThetaInvariants theta_invariants(const M3Params& p, double theta) {
  const auto [s, c] = theta_trig(theta);
  const double t2 = p.tau() * p.tau();
  return {p.kappa() * s * s + t2 * c * c, p.gap() * s * s / (2.0 * t2)};
}

ScalarInvariants scalar_invariants(const M3Params& p) {
  const double t2 = p.tau() * p.tau();
  ScalarInvariants out{t2 / 4.0, {p.kappa() - t2 / 2.0, p.kappa() - t2 / 2.0, t2 / 2.0}, space_type(p), std::nullopt};
  if (out.type == SpaceType::BergerSphere) {
    out.fiber_length = 4.0 * pi * p.tau() / p.kappa();
  }
  return out;
}

ReductiveAlgebra build_algebra_raw(double kappa, double tau) {
  auto t = ReductiveAlgebra::Tables::zeros(3, 1);
  t.mm_m_at(0, 1, 2) = tau;
  t.mm_m_at(1, 0, 2) = -tau;
  t.mm_k_at(0, 1, 0) = kappa - tau * tau;
  t.mm_k_at(1, 0, 0) = -(kappa - tau * tau);
  t.mm_m_at(0, 2, 1) = -tau;
  t.mm_m_at(2, 0, 1) = tau;
  t.mm_m_at(1, 2, 0) = tau;
  t.mm_m_at(2, 1, 0) = -tau;
  t.km_at(0, 0, 1) = 1.0;
  t.km_at(0, 1, 0) = -1.0;
  return ReductiveAlgebra(std::move(t));
}

ReductiveAlgebra build_algebra(const M3Params& p) { return build_algebra_raw(p.kappa(), p.tau()); }

Matrix rotation_a12(double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  Matrix g = Matrix::Identity(3, 3);
  g(0, 0) = c;
  g(0, 1) = -s;
  g(1, 0) = s;
  g(1, 1) = c;
  return g;
}

SkewOp a12_generator() {
  Matrix a = Matrix::Zero(3, 3);
  a(1, 0) = 1.0;
  a(0, 1) = -1.0;
  return SkewOp(a);
}

Vector direction_vector(const Direction& d) {
  const auto [s, c] = theta_trig(d.theta());
  Vector u(3);
  if (d.phi() == 0.0) {
    u << s, 0.0, c;
  } else {
    u << s * std::cos(d.phi()), s * std::sin(d.phi()), c;
  }
  return u;
}

std::array<SymOp, 3> frame_v(double theta) {
  if (!(theta > 0.0 && theta < pi)) {
    throw DomainError("frame_v requires theta in (0, pi)");
  }
  const auto [s, c] = theta_trig(theta);
  const double h = std::sqrt(2.0) / 2.0;
  Matrix v1 = Matrix::Zero(3, 3);
  v1(0, 1) = v1(1, 0) = h * c;
  v1(1, 2) = v1(2, 1) = -h * s;
  Matrix v2 = Matrix::Zero(3, 3);
  v2(0, 0) = -h * c * c;
  v2(0, 2) = v2(2, 0) = h * s * c;
  v2(2, 2) = -h * s * s;
  Matrix v3 = v2;
  v2(1, 1) = h;
  v3(1, 1) = -h;
  return {SymOp(v1), SymOp(v2), SymOp(v3)};
}

OperatorData operator_data(const M3Params& p, const Direction& d) {
  const auto [s, c] = theta_trig(d.theta());
  const double tau = p.tau();
  const double mu = theta_invariants(p, d.theta()).mu;

  Matrix sm = Matrix::Zero(3, 3);
  sm(0, 1) = -c;
  sm(1, 0) = c;
  sm(1, 2) = -s;
  sm(2, 1) = s;
  sm *= tau / 2.0;
  Matrix rt = Matrix::Zero(3, 3);
  rt(1, 1) = -2.0 * tau * tau * mu;

  if (d.phi() != 0.0) {
    const Matrix g = rotation_a12(d.phi());
    sm = g * sm * g.transpose();
    rt = g * rt * g.transpose();
  }
  const SkewOp sop(sm);
  const SymOp rtop(rt);
  return {sop, rtop, rtop - sop.squared()};
}

}  // namespace natred
