#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lefschetz/errors.hpp"
#include "lefschetz/integrand.hpp"
#include "lefschetz/quadrature.hpp"

using namespace lefschetz;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::MatrixXd random_matrix(int n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Eigen::MatrixXd W(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) W(i, j) = g(rng);
  return W;
}

double unit_sphere_area(int n) {
  // Area of S^{n-1}: 2, 2 pi, 4 pi for n = 1, 2, 3.
  return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
}

}  // namespace

TEST(Profile, Examples) {
  const RadialProfile sec{ProfileKind::Secant, 0.7};
  const auto s0 = profile_eval(sec, 0.0);
  EXPECT_TRUE(s0.inside);
  EXPECT_EQ(s0.rho, 0.0);
  EXPECT_EQ(s0.drho, 0.0);
  EXPECT_EQ(s0.rho_over_r, 0.0);

  const RadialProfile rat{ProfileKind::RationalOdd, 0.7};
  const auto r0 = profile_eval(rat, 0.0);
  EXPECT_EQ(r0.rho, 0.0);
  EXPECT_EQ(r0.drho, 1.0);
  EXPECT_EQ(r0.rho_over_r, 1.0);

  for (auto kind : {ProfileKind::Secant, ProfileKind::Tangent, ProfileKind::RationalOdd}) {
    EXPECT_FALSE(profile_eval({kind, 0.7}, 0.7).inside);
    EXPECT_FALSE(profile_eval({kind, 0.7}, 1.0).inside);
  }
}

TEST(Profile, MonotoneWithMatchingDerivative) {
  for (auto kind : {ProfileKind::Secant, ProfileKind::Tangent, ProfileKind::RationalOdd}) {
    const RadialProfile p{kind, 1.3};
    double prev = -1.0;
    for (int i = 0; i < 1000; ++i) {
      const double r = 1.3 * i / 1000.0;
      const auto v = profile_eval(p, r);
      ASSERT_TRUE(v.inside);
      EXPECT_GT(v.rho, prev);
      prev = v.rho;
      const double h = 1e-6;
      if (r > 2 * h) {
        const double fd = (profile_eval(p, r + h).rho - profile_eval(p, r - h).rho) / (2 * h);
        EXPECT_NEAR(v.drho, fd, 1e-5 * std::max(1.0, std::abs(fd)));
        EXPECT_NEAR(v.rho_over_r, v.rho / r, 1e-12 * std::max(1.0, v.rho / r));
      }
    }
    // Gaussian decay beats the profile blow-up at the tube edge.
    const auto edge = profile_eval(p, 1.3 * (1 - 1e-3));
    EXPECT_LT(std::exp(-edge.rho * edge.rho) * edge.drho, 1e-100);
  }
}

TEST(JacobiDecompose, FlatExample) {
  const Eigen::Vector3d q(0.3, -1.0, 2.0), w(1.1, 0.5, -0.7);
  const auto vh = jacobi_decompose(0.0, 0.8, q, w);
  EXPECT_LT((vh.X1 - 0.5 * (q - w)).norm(), 1e-14);
  EXPECT_LT((vh.Z1 - 0.5 * (w - q)).norm(), 1e-14);
  EXPECT_LT((vh.Xt1 - 0.5 * (q + w)).norm(), 1e-14);
}

TEST(JacobiDecompose, HyperbolicMidpointVelocity) {
  const double d = 1.3;
  const Eigen::Vector2d q(0.4, -0.2), w(1.0, 0.9);
  const auto vh = jacobi_decompose(-1.0, d, q, w);
  EXPECT_NEAR(vh.midpoint_velocity(1), (w(1) - q(1)) / (2 * std::sinh(d / 2)), 1e-14);
  EXPECT_NEAR(vh.midpoint_velocity(0), (w(0) - q(0)) / d, 1e-14);
}

TEST(JacobiDecompose, Linearity) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.01, 3.0);
  for (double kappa : {-1.0, 0.0, 1.0})
    for (int s = 0; s < 10000; ++s) {
      const int n = 2 + s % 2;
      const double d = kappa > 0 ? std::min(u(rng), 3.0) : u(rng);
      const Eigen::VectorXd q = random_matrix(n, rng).col(0);
      const Eigen::VectorXd w = random_matrix(n, rng).col(0);
      const auto vh = jacobi_decompose(kappa, d, q, w);
      ASSERT_LT((vh.X1 + vh.Xt1 - q).norm(), 1e-10);
      ASSERT_LT((vh.Z1 + vh.Zt1 - w).norm(), 1e-10 * std::max(1.0, w.norm()));
    }
}

TEST(JacobiDecompose, SmallDistanceApproachesFlat) {
  std::mt19937_64 rng(22);
  for (double kappa : {-1.0, 1.0}) {
    for (double d : {1e-1, 5e-2}) {
      const Eigen::VectorXd q = random_matrix(2, rng).col(0);
      const Eigen::VectorXd w = random_matrix(2, rng).col(0);
      const auto curved = jacobi_decompose(kappa, d, q, w);
      const auto flat = jacobi_decompose(0.0, d, q, w);
      const double scale = q.norm() + w.norm();
      EXPECT_LT((curved.X1 - flat.X1).norm(), d * d * scale);
      EXPECT_LT((curved.Zt1 - flat.Zt1).norm(), d * d * scale);
    }
  }
  EXPECT_THROW(jacobi_decompose(1.0, kPi, Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)), ConjugatePoint);
}

TEST(ABMatrices, FlatIsHalfSumAndDifference) {
  std::mt19937_64 rng(23);
  const Eigen::MatrixXd W = random_matrix(3, rng);
  const auto ab = ab_matrices(0.0, 0.9, W);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(3, 3);
  EXPECT_EQ(ab.A, 0.5 * (W + I));
  EXPECT_EQ(ab.B, 0.5 * (W - I));
  const auto at_fixed = ab_matrices(-1.0, 0.0, W);
  EXPECT_LT((at_fixed.A - 0.5 * (W + I)).norm(), 1e-15);
  EXPECT_LT((at_fixed.B - 0.5 * (W - I)).norm(), 1e-15);
}

TEST(ABMatrices, HyperbolicDeterminants) {
  // In the unit-sphere normalization (rows scaled by sqrt 2) the determinants
  // take the closed forms d/(4 sinh(d/2)) det(W - I) and (2/cosh(d/2)) det((W + I)/2).
  std::mt19937_64 rng(24);
  const Eigen::Matrix2d I = Eigen::Matrix2d::Identity();
  EXPECT_NEAR(ab_matrices(-1.0, 1.1, I).B.determinant(), 0.0, 1e-15);
  for (int s = 0; s < 100; ++s) {
    const double d = 0.05 + 0.03 * s;
    const Eigen::MatrixXd W = random_matrix(2, rng);
    const auto ab = ab_matrices(-1.0, d, W);
    const double detB = 2.0 * ab.B.determinant();
    const double detA = 2.0 * ab.A.determinant();
    EXPECT_NEAR(detB, d / (4 * std::sinh(d / 2)) * (W - I).determinant(), 1e-10);
    EXPECT_NEAR(detA, 2.0 / std::cosh(d / 2) * (0.5 * (W + I)).determinant(), 1e-10);
  }
}

TEST(Integrand, ClosedFormMatchesGenericAssembly) {
  std::mt19937_64 rng(25);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double kappa : {-1.0, 1.0})
    for (auto kind : {ProfileKind::Secant, ProfileKind::RationalOdd})
      for (int s = 0; s < 500; ++s) {
        const RadialProfile p{kind, 1.2};
        const double d = 1.6 * u(rng);
        const Eigen::MatrixXd W = random_matrix(2, rng);
        const double generic = integrand_from_frame(kappa, d, W, p);
        const double closed = integrand_surface_closed_form(kappa, d, W, p);
        const double perm = integrand_permutation_assembly(kappa, d, W, p);
        const double scale = std::max(1.0, std::abs(generic));
        ASSERT_NEAR(closed, generic, 1e-10 * scale) << kappa << " d=" << d;
        ASSERT_NEAR(perm, generic, 1e-10 * scale);
      }
}

TEST(Integrand, PermutationAssemblyAgreesInHigherRank) {
  std::mt19937_64 rng(26);
  for (int n : {1, 2, 3})
    for (int s = 0; s < 50; ++s) {
      const RadialProfile p{ProfileKind::RationalOdd, 1.0};
      const Eigen::MatrixXd W = random_matrix(n, rng);
      const double a = integrand_from_frame(0.0, 0.6, W, p);
      const double b = integrand_permutation_assembly(0.0, 0.6, W, p);
      EXPECT_NEAR(a, b, 1e-12 * std::max(1.0, std::abs(a)));
    }
}

TEST(Integrand, FixedPointLimitIsContinuous) {
  std::mt19937_64 rng(27);
  for (double kappa : {-1.0, 1.0}) {
    const RadialProfile p{ProfileKind::Secant, 1.0};
    const Eigen::MatrixXd W = random_matrix(2, rng);
    const double at0 = integrand_from_frame(kappa, 0.0, W, p);
    for (double d : {1e-2, 1e-3}) EXPECT_NEAR(integrand_from_frame(kappa, d, W, p), at0, 10 * d * d);
  }
}

TEST(Integrand, ThomNormalizationOfConstantMap) {
  // A constant map has Lefschetz number 1; its flat density integrates to one
  // over a single fiber for every rank and profile.
  for (int n : {1, 2, 3})
    for (auto kind : {ProfileKind::Secant, ProfileKind::Tangent, ProfileKind::RationalOdd}) {
      const RadialProfile p{kind, 1.0};
      const Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n);
      const double dmax = std::sqrt(2.0);
      const int steps = 200000;
      double total = 0.5 * integrand_from_frame(0.0, 0.0, W, p) * (n == 1 ? 1.0 : 0.0);
      for (int i = 1; i < steps; ++i) {
        const double d = dmax * i / steps;
        total += integrand_from_frame(0.0, d, W, p) * std::pow(d, n - 1);
      }
      total *= unit_sphere_area(n) * dmax / steps;
      EXPECT_NEAR(total, 1.0, 1e-6) << "n=" << n << " " << to_string(kind);
    }
}

TEST(Integrand, IdentityDensities) {
  const RadialProfile p{ProfileKind::Secant, 1.0};
  const auto T = ModelGeometry::flat_torus({2 * kPi, 2 * kPi});
  EXPECT_EQ(lefschetz_integrand(T, make_map(Identity{}), p, make_point(T, Eigen::Vector2d(1, 2))), 0.0);
  const auto S = ModelGeometry::sphere2();
  std::mt19937_64 rng(28);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int s = 0; s < 20; ++s) {
    const auto x = make_point(S, Eigen::Vector3d(g(rng), g(rng), g(rng)).normalized());
    EXPECT_NEAR(lefschetz_integrand(S, make_map(Identity{}), p, x), 1.0 / (2 * kPi), 1e-14);
  }
}

TEST(Integrand, FlatTheoremExamples) {
  LefschetzOptions o;
  o.profile = ProfileKind::RationalOdd;
  o.resolution = 4096;
  EXPECT_NEAR(compute_lefschetz(ModelGeometry::circle(), parse_map("circle_power:3"), o).integral, -2.0, 1e-4);
  o.resolution = 128;
  const auto T = ModelGeometry::flat_torus({2 * kPi, 2 * kPi});
  EXPECT_NEAR(compute_lefschetz(T, parse_map("torus_linear:2,0,0,3"), o).integral, 2.0, 1e-3);
}

TEST(Integrand, ProfileAndTubeInvariance) {
  struct Case {
    ModelGeometry M;
    std::string map;
    int res;
  };
  const std::vector<Case> cases = {
      {ModelGeometry::circle(), "circle_power:3", 8192},
      {ModelGeometry::flat_torus({2 * kPi, 2 * kPi}), "torus_linear:2,1,1,1", 256},
      {ModelGeometry::sphere2(), "suspension:2", 256},
  };
  for (const auto& c : cases) {
    LefschetzOptions o;
    o.resolution = c.res;
    const auto f = parse_map(c.map);
    o.profile = ProfileKind::Secant;
    const double sec = compute_lefschetz(c.M, f, o).integral;
    o.profile = ProfileKind::RationalOdd;
    const double rat = compute_lefschetz(c.M, f, o).integral;
    EXPECT_LE(std::abs(sec - rat), 2e-3) << c.map;
    o.profile = ProfileKind::Secant;
    o.epsilon_fraction = 0.225;
    o.resolution = 2 * c.res;
    if (c.M.kind() == GeometryKind::FlatTorus) o.resolution = c.res;
    const double half = compute_lefschetz(c.M, f, o).integral;
    EXPECT_LE(std::abs(sec - half), 2e-3) << c.map;
  }
}
