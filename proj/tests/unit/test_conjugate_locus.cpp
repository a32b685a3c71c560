#include <gtest/gtest.h>

#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <numbers>

#include "natred/conjugate_locus.hpp"
#include "natred/errors.hpp"
#include "natred/jacobi.hpp"
#include "natred/m3_geometry.hpp"
#include "natred/sampling.hpp"

namespace natred {
namespace {

using std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Reference zeros of sin(s/2) - mu s cos(s/2), 20-digit arbitrary-precision bisection.
constexpr double kS0MuMinus1p5 = 3.51632833926703792254;
constexpr double kS1MuMinus1p5 = 9.56396501101609960107;
constexpr double kS1MuQuarter = 8.54956454291625609410;
constexpr double kS2MuQuarter = 15.1930920395011755249;
constexpr double kS1Mu9over32 = 8.64433049406430265416;
constexpr double kS2Mu9over32 = 15.2498402718165206099;

struct ScanRoot {
  double t;
  int multiplicity;
};

int multiplicity_at(const M3Params& p, const Direction& d, double t) {
  Eigen::JacobiSVD<Matrix> svd(solution_matrix(p, d, t).matrix());
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < 3; ++i)
    if (sv(i) > 1e-7 * sv(0)) ++rank;
  return 3 - rank;
}

// Sign changes of the evaluated 3x3 determinant, refined by bisection.
std::vector<ScanRoot> scan_roots(const M3Params& p, const Direction& d, double t_max, double step) {
  auto det = [&](double t) { return solution_matrix(p, d, t).matrix().determinant(); };
  std::vector<ScanRoot> out;
  double a = step, fa = det(a);
  for (double b = 2 * step; b <= t_max; b += step) {
    const double fb = det(b);
    if ((fa < 0) != (fb < 0)) {
      double lo = a, hi = b, flo = fa;
      for (int k = 0; k < 80 && hi - lo > 1e-14 * hi; ++k) {
        const double mid = 0.5 * (lo + hi), fm = det(mid);
        if ((fm < 0) == (flo < 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      const double t = 0.5 * (lo + hi);
      out.push_back({t, multiplicity_at(p, d, t)});
    }
    a = b;
    fa = fb;
  }
  return out;
}

TEST(FTheta, Examples) {
  const M3Params p(0, 1);
  EXPECT_NEAR(f_theta(p, pi / 4, 2 * pi), 0.0, 1e-15);
  EXPECT_EQ(f_theta(p, 0.0, pi), 2.0);
  const auto s1 = branch_root(p, pi / 4, 1);
  ASSERT_TRUE(s1.has_value());
  EXPECT_NEAR(f_theta(p, pi / 4, *s1), 0.0, 1e-12);
}

TEST(BranchRoot, FrozenValues) {
  EXPECT_NEAR(*branch_equation_root(-1.5, 0), kS0MuMinus1p5, 1e-14);
  EXPECT_NEAR(*branch_equation_root(-1.5, 1), kS1MuMinus1p5, 1e-14);
  EXPECT_NEAR(*branch_equation_root(0.25, 1), kS1MuQuarter, 1e-14);
  EXPECT_NEAR(*branch_equation_root(0.25, 2), kS2MuQuarter, 1e-13);
  EXPECT_NEAR(*branch_equation_root(9.0 / 32, 1), kS1Mu9over32, 1e-14);
  EXPECT_NEAR(*branch_equation_root(9.0 / 32, 2), kS2Mu9over32, 1e-13);
  EXPECT_NEAR(*branch_root(M3Params(4, 1), pi / 2, 0), kS0MuMinus1p5, 1e-14);
  EXPECT_NEAR(*branch_root(M3Params(0, 1), pi / 4, 1), kS1MuQuarter, 1e-14);
  EXPECT_LT(std::abs(branch_residual(-1.5, *branch_equation_root(-1.5, 0))), 1e-13);
}

TEST(BranchRoot, DegenerateAndInvalid) {
  EXPECT_FALSE(branch_equation_root(0.0, 1).has_value());
  EXPECT_FALSE(branch_root(M3Params(0, 1), 0.0, 1).has_value());
  EXPECT_FALSE(branch_root(M3Params(-1, 1), pi / 2, 1).has_value());
  EXPECT_THROW(branch_equation_root(0.25, 0), DomainError);
  EXPECT_THROW(branch_equation_root(-0.25, -1), DomainError);
}

TEST(BranchRoot, WindowsProperty) {
  Sampler rng(61);
  for (int i = 0; i < 500; ++i) {
    const bool negative = rng.coin();
    const double mu = negative ? -rng.uniform(1e-3, 50) : rng.uniform(1e-3, 0.4999);
    const int p = rng.integer(negative ? 0 : 1, 6);
    const double s = *branch_equation_root(mu, p);
    const double lo = negative ? (2 * p + 1) * pi : 2 * p * pi;
    EXPECT_GT(s, lo);
    EXPECT_LT(s, lo + pi);
    EXPECT_LT(std::abs(branch_residual(mu, s)), 1e-13 * (1 + std::abs(mu) * s));
  }
}

TEST(BranchRoot, LimitsAtLargeGap) {
  for (int p = 0; p < 3; ++p) {
    double prev = kInf;
    for (double kappa : {2.0, 5.0, 10.0, 100.0, 1e4}) {
      const double s = *branch_root(M3Params(kappa, 1), pi / 2, p);
      EXPECT_LT(s, prev);
      prev = s;
    }
    EXPECT_LT(prev - (2 * p + 1) * pi, 1e-3);
  }
}

TEST(BranchRoot, EndpointLimits) {
  for (int p = 1; p < 4; ++p) {
    EXPECT_NEAR(*branch_root(M3Params(0, 1), 1e-5, p), 2 * p * pi, 1e-4);
    EXPECT_NEAR(*branch_root(M3Params(4, 1), 1e-5, p), 2 * (p + 1) * pi, 1e-4);
  }
  EXPECT_NEAR(*branch_root(M3Params(4, 1), 1e-5, 0), 2 * pi, 1e-4);
}

TEST(ConjugatePoints, Examples) {
  EXPECT_TRUE(conjugate_points(M3Params(-1, 1), Direction(pi / 2), 1e3).empty());

  const auto hopf = conjugate_points(M3Params(1, 2), Direction(0.0), 10.0);
  ASSERT_EQ(hopf.size(), 3u);
  for (int k = 0; k < 3; ++k) {
    EXPECT_NEAR(hopf[k].t, (k + 1) * pi, 1e-14);
    EXPECT_EQ(hopf[k].multiplicity, 2);
    EXPECT_EQ(hopf[k].kind, ConjugateKind::HopfFiber);
    EXPECT_FALSE(hopf[k].isotropic);
  }

  const auto heis = conjugate_points(M3Params(0, 1), Direction(pi / 4), 20.0);
  ASSERT_GE(heis.size(), 2u);
  EXPECT_EQ(heis[0].kind, ConjugateKind::IsotropicLattice);
  EXPECT_NEAR(heis[0].t, 2 * pi * std::sqrt(2.0), 1e-13);
  EXPECT_TRUE(heis[0].isotropic);
  EXPECT_EQ(heis[0].multiplicity, 1);
  EXPECT_EQ(heis[1].kind, ConjugateKind::NonIsotropicBranch);
  EXPECT_NEAR(heis[1].t, kS1MuQuarter * std::sqrt(2.0), 1e-13);
  EXPECT_FALSE(heis[1].isotropic);

  const auto berger = conjugate_points(M3Params(4, 1), Direction(pi / 2), 4.0);
  ASSERT_EQ(berger.size(), 2u);
  EXPECT_EQ(berger[0].kind, ConjugateKind::NonIsotropicBranch);
  EXPECT_EQ(berger[0].p, 0);
  EXPECT_EQ(berger[1].kind, ConjugateKind::IsotropicLattice);
  EXPECT_NEAR(berger[1].t, pi, 1e-14);
}

TEST(ConjugatePoints, AgreeWithDeterminantScanProperty) {
  Sampler rng(62);
  int cases = 0;
  while (cases < 30) {
    const double tau = rng.uniform(0.5, 2.0);
    const double kappa = rng.uniform(-2, 6);
    if (std::abs(kappa - tau * tau) < 0.1) continue;
    const M3Params p(kappa, tau);
    const Direction d(rng.uniform(0.1, pi - 0.1), rng.uniform(0, 2 * pi));
    const auto inv = theta_invariants(p, d.theta());
    if (inv.lambda < 0.2 || std::abs(inv.mu) < 0.02) continue;
    ++cases;
    const double t_max = 30.0 / std::sqrt(inv.lambda);
    const auto pts = conjugate_points(p, d, t_max);
    const auto ref = scan_roots(p, d, t_max - 1e-3, 1e-3);
    ASSERT_EQ(pts.size(), ref.size()) << kappa << " " << tau << " " << d.theta();
    for (std::size_t k = 0; k < pts.size(); ++k) {
      EXPECT_NEAR(pts[k].t, ref[k].t, 1e-6);
      EXPECT_EQ(pts[k].multiplicity, ref[k].multiplicity);
      EXPECT_NEAR(pts[k].s, pts[k].t * std::sqrt(inv.lambda), 1e-12 * pts[k].s);
    }
  }
}

TEST(ConjugatePoints, KernelIsotropyMatchesKindProperty) {
  Sampler rng(63);
  for (int i = 0; i < 30; ++i) {
    const double tau = rng.uniform(0.5, 2.0);
    const double kappa = rng.uniform(0.2, 6);
    if (std::abs(kappa - tau * tau) < 0.1) continue;
    const M3Params p(kappa, tau);
    const Direction d(rng.integer(0, 4) == 0 ? 0.0 : rng.uniform(0.1, pi - 0.1), rng.uniform(0, 2 * pi));
    for (const auto& pt : conjugate_points(p, d, 25.0)) {
      const Matrix k = solution_kernel(p, d, pt.t, 1e-8);
      ASSERT_EQ(k.cols(), pt.multiplicity);
      for (int j = 0; j < k.cols(); ++j) EXPECT_EQ(isotropy_test(p, d, k.col(j)).is_isotropic, pt.isotropic);
      EXPECT_EQ(pt.isotropic, pt.kind == ConjugateKind::IsotropicLattice);
    }
  }
}

TEST(ConjugatePoints, NoneWhenLambdaNonPositiveProperty) {
  Sampler rng(64);
  int cases = 0;
  while (cases < 20) {
    const double tau = rng.uniform(0.3, 2.0);
    const M3Params p(-rng.uniform(0.2, 4), tau);
    const double theta = rng.uniform(0, pi);
    if (theta_invariants(p, theta).lambda > 0) continue;
    ++cases;
    const Direction d(theta);
    EXPECT_TRUE(conjugate_points(p, d, 50.0).empty());
    const double first = solution_determinant(p, d, 0.1);
    EXPECT_GT(std::abs(first), 1e-10);
    for (double t = 0.1; t <= 50.0; t += 0.01) {
      const double v = solution_determinant(p, d, t);
      EXPECT_GT(std::abs(v), 1e-10);
      EXPECT_EQ(v > 0, first > 0);
    }
  }
}

TEST(ConjugateRadius, Examples) {
  EXPECT_NEAR(conjugate_radius(M3Params(0, 1), pi / 4), 2 * pi * std::sqrt(2.0), 1e-13);
  EXPECT_NEAR(conjugate_radius(M3Params(4, 1), pi / 2), kS0MuMinus1p5 / 2, 1e-14);
  EXPECT_NEAR(conjugate_radius(M3Params(4, 1), pi / 2), 1.758164169633519, 1e-14);
  EXPECT_EQ(conjugate_radius(M3Params(-1, 1), pi / 2), kInf);
  EXPECT_NEAR(conjugate_radius(M3Params(1, 2), 0.0), pi, 1e-15);
}

TEST(ConjugateRadius, GlobalIsGridInfimum) {
  EXPECT_NEAR(global_conjugate_radius(M3Params(1, 2)), pi, 1e-15);
  EXPECT_NEAR(global_conjugate_radius(M3Params(0, 1)), 2 * pi, 1e-15);
  EXPECT_NEAR(global_conjugate_radius(M3Params(4, 1)), kS0MuMinus1p5 / 2, 1e-14);
  for (const M3Params p : {M3Params(4, 1), M3Params(0, 1), M3Params(-2, 1.5), M3Params(9, 0.5), M3Params(1, 2)}) {
    double inf = kInf;
    for (int k = 0; k <= 1000; ++k) inf = std::min(inf, conjugate_radius(p, pi * k / 1000));
    EXPECT_NEAR(global_conjugate_radius(p), inf, 1e-6);
  }
}

TEST(ConjugateRadius, FirstPointIsotropyDichotomy) {
  Sampler rng(65);
  for (int i = 0; i < 200; ++i) {
    const double tau = rng.uniform(0.3, 2.0);
    const double kappa = rng.uniform(-3, 6);
    if (std::abs(kappa - tau * tau) < 1e-2) continue;
    const M3Params p(kappa, tau);
    const double theta = rng.integer(0, 5) == 0 ? 0.0 : rng.uniform(0.01, pi - 0.01);
    const double rho = conjugate_radius(p, theta);
    if (!std::isfinite(rho)) continue;
    const auto pts = conjugate_points(p, Direction(theta), rho * (1 + 1e-9));
    ASSERT_FALSE(pts.empty());
    EXPECT_NEAR(pts.front().t, rho, 1e-12 * rho);
    EXPECT_EQ(pts.front().isotropic, kappa < tau * tau && theta > 0);
  }
}

TEST(ClassifyGeodesic, Examples) {
  EXPECT_EQ(classify_geodesic(M3Params(0, 3), pi / 2), GeodesicClass::Isotropic);
  EXPECT_EQ(classify_geodesic(M3Params(-1, 1), pi / 2), GeodesicClass::Isotropic);
  EXPECT_EQ(classify_geodesic(M3Params(-1, 1), pi / 4), GeodesicClass::Isotropic);
  EXPECT_EQ(classify_geodesic(M3Params(-1, 1), 0.7), GeodesicClass::HasNonIsotropicConjugates);
  EXPECT_EQ(classify_geodesic(M3Params(1, 2), pi), GeodesicClass::HopfFiber);
  for (int k = 1; k < 100; ++k)
    EXPECT_EQ(classify_geodesic(M3Params(4, 1), pi * k / 100), GeodesicClass::HasNonIsotropicConjugates);
}

TEST(ClosedGeodesic, Invariant) {
  const M3Params p(4, 1);
  EXPECT_NEAR(closed_geodesic_invariant(p, pi / 2, pi), 0.0, 1e-15);
  const double lam = 3.25;
  EXPECT_NEAR(closed_geodesic_invariant(p, pi / 3, 2 * pi / std::sqrt(lam)), -1.5 / std::sqrt(lam), 1e-14);
  EXPECT_NEAR(closed_geodesic_invariant(p, pi / 3, 6 * pi / std::sqrt(lam)), -4.5 / std::sqrt(lam), 1e-14);
  EXPECT_THROW(closed_geodesic_invariant(p, pi / 3, 1.3 * 2 * pi / std::sqrt(lam)), DomainError);
  EXPECT_THROW(closed_geodesic_invariant(M3Params(0, 1), pi / 3, 1.0), DomainError);
  EXPECT_THROW(closed_geodesic_invariant(p, 0.0, pi), DomainError);
}

TEST(ClosedGeodesic, ExactRationalDecision) {
  EXPECT_TRUE(geodesic_closed_exact({5, 1}, {1, 1}, {1, 2}));
  EXPECT_FALSE(geodesic_closed_exact({4, 1}, {1, 1}, {1, 2}));
  EXPECT_TRUE(geodesic_closed_exact({4, 1}, {1, 1}, {0, 1}));
  EXPECT_THROW(geodesic_closed_exact({9, 4}, {3, 2}, {1, 3}), DomainError);
  EXPECT_TRUE(geodesic_closed_exact({5, 2}, {1, 1}, {3, 5}));
  EXPECT_FALSE(geodesic_closed_exact({2, 1}, {1, 1}, {1, 3}));
  EXPECT_THROW(geodesic_closed_exact({-1, 1}, {1, 1}, {1, 2}), DomainError);
  EXPECT_THROW(geodesic_closed_exact({4, 1}, {1, 1}, {1, 1}), DomainError);
  EXPECT_THROW(geodesic_closed_exact({4, 1}, {1, 0}, {1, 2}), DomainError);
  EXPECT_THROW(geodesic_closed_exact({INT64_MAX, 1}, {1, 1}, {1, INT64_MAX - 1}), DomainError);
}

TEST(SampleLocus, Examples) {
  const auto plane = sample_locus(M3Params(0, 2), LocusFamily::S1, 1, {pi / 4}, {0.0});
  const Eigen::Vector3d x = plane.points[0][0];
  EXPECT_NEAR(x(0), pi, 1e-14);
  EXPECT_EQ(x(1), 0.0);
  EXPECT_NEAR(x(2), pi, 1e-14);

  const auto s0 = sample_locus(M3Params(4, 1), LocusFamily::S2, 0, {pi / 2}, {0.0});
  EXPECT_NEAR(s0.points[0][0](0), kS0MuMinus1p5 / 2, 1e-14);
  EXPECT_NEAR(s0.points[0][0].tail<2>().norm(), 0.0, 1e-15);

  const auto poles = sample_locus(M3Params(4, 1), LocusFamily::S2, 1, {0.0, pi}, {0.0});
  EXPECT_NEAR(poles.s[0], 4 * pi, 1e-14);
  const auto poles2 = sample_locus(M3Params(0, 1), LocusFamily::S2, 1, {0.0}, {0.0});
  EXPECT_NEAR(poles2.s[0], 2 * pi, 1e-14);

  EXPECT_THROW(sample_locus(M3Params(-1, 1), LocusFamily::S1, 1, {pi / 2}, {0.0}), DomainError);
  EXPECT_THROW(sample_locus(M3Params(0, 1), LocusFamily::S2, 0, {0.5}, {0.0}), DomainError);
  EXPECT_THROW(sample_locus(M3Params(4, 1), LocusFamily::S1, 0, {0.5}, {0.0}), DomainError);
  EXPECT_THROW(sample_locus(M3Params(4, 1), LocusFamily::S1, 1, {}, {0.0}), DomainError);
}

TEST(SampleLocus, QuadricProperty) {
  Sampler rng(66);
  for (int i = 0; i < 30; ++i) {
    const double tau = rng.uniform(0.5, 2.0);
    const double kappa = rng.uniform(0.1, 6);
    if (std::abs(kappa - tau * tau) < 0.1) continue;
    const M3Params p(kappa, tau);
    const auto family = rng.coin() ? LocusFamily::S1 : LocusFamily::S2;
    const int pp = rng.integer(kappa > tau * tau && family == LocusFamily::S2 ? 0 : 1, 3);
    std::vector<double> th, ph;
    for (int k = 0; k <= 12; ++k) th.push_back(pi * k / 12);
    for (int k = 0; k < 8; ++k) ph.push_back(2 * pi * k / 8);
    const auto surf = sample_locus(p, family, pp, th, ph);
    for (std::size_t a = 0; a < th.size(); ++a) {
      for (const auto& v : surf.points[a]) {
        const double q = kappa * (v(0) * v(0) + v(1) * v(1)) + tau * tau * v(2) * v(2);
        EXPECT_NEAR(q, surf.s[a] * surf.s[a], 1e-9 * surf.s[a] * surf.s[a]);
      }
    }
    if (family == LocusFamily::S1)
      for (const auto& row : surf.points)
        for (const auto& v : row) EXPECT_TRUE(isotropic_locus_membership(p, v) || std::hypot(v(0), v(1)) < 1e-9);
  }
}

TEST(IsotropicLocusMembership, Examples) {
  const M3Params p(0, 2);
  EXPECT_FALSE(isotropic_locus_membership(p, Eigen::Vector3d(0, 0, pi)));
  EXPECT_FALSE(isotropic_locus_membership(p, Eigen::Vector3d(0, 0, 0)));
  EXPECT_TRUE(isotropic_locus_membership(p, Eigen::Vector3d(pi, 0, pi)));
  EXPECT_TRUE(isotropic_locus_membership(p, Eigen::Vector3d(-3, 7, -2 * pi)));
  EXPECT_FALSE(isotropic_locus_membership(p, Eigen::Vector3d(1, 0, 1.2 * pi)));
  const M3Params b(4, 1);
  const auto surf = sample_locus(b, LocusFamily::S1, 1, {pi / 3}, {0.4});
  EXPECT_TRUE(isotropic_locus_membership(b, surf.points[0][0]));
  const auto branch = sample_locus(b, LocusFamily::S2, 1, {pi / 3}, {0.4});
  EXPECT_FALSE(isotropic_locus_membership(b, branch.points[0][0]));
}

}  // namespace
}  // namespace natred
