#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "lefschetz/cutflow.hpp"
#include "lefschetz/errors.hpp"
#include "lefschetz/oracles.hpp"

using namespace lefschetz;

namespace {

constexpr double kPi = std::numbers::pi;

ModelGeometry torus2() { return ModelGeometry::flat_torus({2 * kPi, 2 * kPi}); }

ManifoldPoint random_sphere_point(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  return make_point(ModelGeometry::sphere2(), Eigen::Vector3d(g(rng), g(rng), g(rng)).normalized());
}

}  // namespace

TEST(TimeProfile, InverseAndRescale) {
  for (auto kind : {TimeProfileKind::Rational, TimeProfileKind::TangentHalf}) {
    const TimeProfile mu{kind};
    EXPECT_EQ(mu.mu(0.0), 0.0);
    double prev = -1.0;
    for (int i = 0; i < 100; ++i) {
      const double s = i / 100.0;
      EXPECT_GT(mu.mu(s), prev);
      prev = mu.mu(s);
      EXPECT_NEAR(mu.mu_inverse(mu.mu(s)), s, 1e-14);
      EXPECT_EQ(mu.rescale(s, 1.0), s);
      for (double t : {0.1, 0.5, 2.0, 16.0}) {
        const double r = mu.rescale(s, t);
        EXPECT_NEAR(r, mu.mu_inverse(t * mu.mu(s)), 1e-13);
        EXPECT_LT(r, 1.0);
        if (s > 1e-3) EXPECT_NEAR(mu.rescale_ratio(s, t), r / s, 1e-12 * std::max(1.0, r / s));
        const double h = 1e-6;
        if (s > 2 * h && s < 0.9) {
          const double fd = (mu.rescale_ratio(s + h, t) - mu.rescale_ratio(s - h, t)) / (2 * h);
          EXPECT_NEAR(mu.rescale_ratio_derivative(s, t), fd, 1e-5 * std::max(1.0, std::abs(fd)));
        }
      }
    }
  }
}

TEST(TMap, Examples) {
  const auto S = ModelGeometry::sphere2();
  const auto susp = parse_map("suspension:2");
  const TimeProfile mu;
  std::mt19937_64 rng(31);
  for (int s = 0; s < 50; ++s) {
    const auto x = random_sphere_point(rng);
    EXPECT_LT(distance(S, t_map(S, susp, mu, 1.0, x), map_eval(S, susp, x)), 1e-14);
    EXPECT_LT(distance(S, t_map(S, susp, mu, 0.0, x), x), 1e-14);
  }
  const auto cut = make_point(S, Eigen::Vector3d(-1, 0, 0));
  ASSERT_LT(distance(S, map_eval(S, susp, cut), make_point(S, Eigen::Vector3d(1, 0, 0))), 1e-14);
  EXPECT_LT(distance(S, t_map(S, susp, mu, 0.0, cut), map_eval(S, susp, cut)), 1e-14);
}

TEST(TMap, ContinuousInT) {
  const auto S = ModelGeometry::sphere2();
  const auto f = parse_map("suspension:3");
  std::mt19937_64 rng(32);
  for (auto kind : {TimeProfileKind::Rational, TimeProfileKind::TangentHalf}) {
    const TimeProfile mu{kind};
    for (int s = 0; s < 200; ++s) {
      const auto x = random_sphere_point(rng);
      if (cut_margin(S, x, map_eval(S, f, x)) < 1e-3) continue;
      for (double t : {0.1, 1.0, 5.0}) {
        const double jump = distance(S, t_map(S, f, mu, t, x), t_map(S, f, mu, t + 1e-7, x));
        EXPECT_LT(jump, 1e-5);
        // The deformed image stays strictly inside the cut locus of x.
        EXPECT_GT(cut_margin(S, x, t_map(S, f, mu, t, x)), 0.0);
      }
    }
  }
}

TEST(TMap, FamilyDifferentialMatchesFiniteDifferences) {
  const auto T = torus2();
  const auto f = parse_map("torus_linear:2,1,1,1");
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(0.0, 2 * kPi);
  for (double t : {0.2, 3.0}) {
    const auto g = t_map_family(T, f, TimeProfile{}, t);
    for (int s = 0; s < 100; ++s) {
      const auto x = make_point(T, Eigen::Vector2d(u(rng), u(rng)));
      if (cut_margin(T, x, map_eval(T, f, x)) < 1e-2) continue;
      const Eigen::MatrixXd a = map_differential(T, g, x);
      const Eigen::MatrixXd d = finite_difference_differential(T, g, x, 1e-6);
      EXPECT_LT((a - d).cwiseAbs().maxCoeff(), 1e-5 * std::max(1.0, a.cwiseAbs().maxCoeff()));
    }
  }
}

TEST(CutSet, Examples) {
  const auto S = ModelGeometry::sphere2();
  const auto susp = classify_cut_set(S, parse_map("suspension:2"), 128);
  EXPECT_EQ(susp.classification, CutClass::Finite);
  EXPECT_EQ(susp.count, 1);
  const auto pts = sphere_cut_points(S, parse_map("suspension:2"));
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_LT((pts[0].coords - Eigen::Vector3d(-1, 0, 0)).norm(), 1e-9);

  EXPECT_EQ(classify_cut_set(torus2(), parse_map("torus_linear:2,0,0,2"), 128).classification,
            CutClass::CurveLike);
  EXPECT_EQ(classify_cut_set(S, parse_map("identity"), 64).classification, CutClass::Empty);
  EXPECT_EQ(classify_cut_set(torus2(), parse_map("identity"), 64).classification, CutClass::Empty);
}

TEST(CutSet, SamplesMatchTolerance) {
  const auto T = torus2();
  const auto est = cut_set_estimate(T, parse_map("torus_linear:2,1,1,1"), build_grid(T, 64));
  ASSERT_GT(est.tolerance, 0.0);
  for (const auto& s : est.samples) EXPECT_EQ(s.in_C_f, s.margin <= est.tolerance);
}

TEST(CutSet, SymmetricMatrixGivesSymmetricCutSet) {
  const auto T = torus2();
  const int N = 96;
  const auto grid = build_grid(T, N);
  for (const char* m : {"torus_linear:2,1,1,1", "torus_linear:2,0,0,2", "torus_linear:3,1,1,-2"}) {
    const auto est = cut_set_estimate(T, parse_map(m), grid);
    std::map<std::pair<long, long>, bool> flags;
    const double step = 2 * kPi / N;
    for (const auto& s : est.samples)
      flags[{std::lround(s.x.coords(0) / step) % N, std::lround(s.x.coords(1) / step) % N}] = s.in_C_f;
    ASSERT_EQ(flags.size(), static_cast<std::size_t>(N * N));
    for (const auto& [key, in] : flags) {
      const std::pair<long, long> mirror{(N - key.first) % N, (N - key.second) % N};
      EXPECT_EQ(flags.at(mirror), in) << m << " at " << key.first << "," << key.second;
    }
  }
}

TEST(Bounds, CheckExamples) {
  const auto S = ModelGeometry::sphere2();
  for (int n : {2, 3}) {
    const auto b = bound_check(S, make_map(SphereSuspension{n}));
    EXPECT_EQ(b.L, n + 1);
    EXPECT_EQ(b.chi, 2);
    ASSERT_TRUE(b.cut_count.has_value());
    EXPECT_EQ(*b.cut_count, n - 1);
    EXPECT_TRUE(b.inequality_holds);
  }
  const auto torus = bound_check(torus2(), parse_map("torus_linear:2,0,0,3"));
  EXPECT_EQ(torus.cut_class, CutClass::CurveLike);
  EXPECT_FALSE(torus.cut_count.has_value());
  EXPECT_TRUE(torus.inequality_holds);
  EXPECT_EQ(torus.to_json().at("cut_count"), "infinite");
  const auto id = bound_check(S, parse_map("identity"), 64);
  EXPECT_EQ(id.L, 2);
  EXPECT_EQ(id.cut_class, CutClass::Empty);
  EXPECT_TRUE(id.inequality_holds);
}

TEST(Bounds, SignRefinement) {
  const auto S = ModelGeometry::sphere2();
  EXPECT_EQ(sign_refinement_sphere(S, parse_map("suspension:2")), 1);
  EXPECT_EQ(sign_refinement_sphere(S, parse_map("suspension:3")), 2);
  EXPECT_EQ(sign_refinement_sphere(S, parse_map("sphere_rotation:0,0,1:1")), 0);
}

TEST(Currents, DegreeCurrent) {
  const std::vector<double> ts = {0.05, 0.1, 0.2};
  const auto C = ModelGeometry::circle();
  EXPECT_NEAR(degree_current_estimate(C, make_map(CirclePower{3}), 65536, ts), 2.0, 0.05);
  EXPECT_NEAR(degree_current_estimate(C, make_map(Identity{}), 1024, ts), 0.0, 1e-12);
  const auto S = ModelGeometry::sphere2();
  EXPECT_NEAR(degree_current_estimate(S, parse_map("sphere_reflection:0,0,1"), 256, ts), -2.0, 0.05);
}

TEST(Currents, SingularPartMatchesLefschetzMinusEuler) {
  const auto S = ModelGeometry::sphere2();
  LefschetzOptions o;
  o.resolution = 256;
  const std::vector<double> ts = {0.05, 0.1, 0.2};
  for (int n : {2, 3}) {
    const auto f = make_map(SphereSuspension{n});
    const double expected = compute_lefschetz(S, f, o).integral - S.euler_characteristic();
    EXPECT_NEAR(singular_current_quadrature(S, f, o, ts), expected, 0.05) << n;
    EXPECT_EQ(singular_current_winding(S, f), std::lround(expected)) << n;
  }
  const auto rot = parse_map("sphere_rotation:0,0,1:1");
  EXPECT_NEAR(singular_current_quadrature(S, rot, o, ts), 0.0, 0.05);
  EXPECT_EQ(singular_current_winding(S, rot), 0);
}
