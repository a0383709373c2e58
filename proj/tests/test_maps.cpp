#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lefschetz/errors.hpp"
#include "lefschetz/maps.hpp"
#include "lefschetz/quadrature.hpp"

using namespace lefschetz;

namespace {

constexpr double kPi = std::numbers::pi;

ModelGeometry torus2() { return ModelGeometry::flat_torus({2 * kPi, 2 * kPi}); }

ManifoldPoint random_point(const ModelGeometry& M, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (M.kind() == GeometryKind::Sphere2) {
    const Eigen::Vector3d v(g(rng), g(rng), g(rng));
    return make_point(M, v.normalized());
  }
  Eigen::VectorXd c(M.dimension());
  for (int i = 0; i < M.dimension(); ++i) c(i) = u(rng) * M.periods()[i];
  return make_point(M, c);
}

struct Case {
  ModelGeometry M;
  std::string map;
};

std::vector<Case> analytic_cases() {
  const auto S = ModelGeometry::sphere2();
  return {
      {ModelGeometry::circle(), "circle_power:3"},
      {ModelGeometry::circle(1.7), "circle_power:-2"},
      {torus2(), "torus_linear:2,1,1,1"},
      {ModelGeometry::flat_torus({2.0, 3.0}), "torus_linear:0,1,-1,0"},
      {ModelGeometry::flat_torus({1.0, 2.0, 3.0}), "torus_linear:1,2,0,0,1,1,-1,0,2"},
      {S, "sphere_rotation:1,2,3:0.7"},
      {S, "sphere_reflection:0,1,1"},
      {S, "suspension:2"},
      {S, "suspension:3"},
      {S, "suspension:-2"},
      {S, "identity"},
  };
}

}  // namespace

TEST(Maps, EvalExamples) {
  const auto C = ModelGeometry::circle();
  const auto y = map_eval(C, parse_map("circle_power:3"), make_point(C, Eigen::VectorXd::Constant(1, kPi / 4)));
  EXPECT_NEAR(y.coords(0), 3 * kPi / 4, 1e-14);

  const auto T = torus2();
  const auto z = map_eval(T, parse_map("torus_linear:2,0,0,3"), make_point(T, Eigen::Vector2d(1, 1)));
  EXPECT_NEAR(z.coords(0), 2.0, 1e-14);
  EXPECT_NEAR(z.coords(1), 3.0, 1e-14);

  const auto S = ModelGeometry::sphere2();
  for (int n : {-3, -2, 2, 3, 4}) {
    const auto f = make_map(SphereSuspension{n});
    for (double s : {1.0, -1.0}) {
      const auto pole = make_point(S, Eigen::Vector3d(0, 0, s));
      EXPECT_LT((map_eval(S, f, pole).coords - pole.coords).norm(), 1e-14);
    }
  }
}

TEST(Maps, DifferentialExamples) {
  const auto C = ModelGeometry::circle();
  const auto x = make_point(C, Eigen::VectorXd::Constant(1, 0.3));
  EXPECT_EQ(map_differential(C, make_map(CirclePower{5}), x)(0, 0), 5.0);

  const auto T = torus2();
  Eigen::MatrixXi A(2, 2);
  A << 2, 1, -1, 3;
  const auto D = map_differential(T, make_map(TorusLinear{A}), make_point(T, Eigen::Vector2d(1, 2)));
  EXPECT_LT((D - A.cast<double>()).norm(), 1e-15);

  const auto S = ModelGeometry::sphere2();
  const auto north = make_point(S, Eigen::Vector3d(0, 0, 1));
  const auto rot = make_map(SphereRotation{Eigen::Vector3d::UnitZ(), 0.9});
  const Eigen::MatrixXd R = map_differential(S, rot, north);
  Eigen::Matrix2d expect;
  expect << std::cos(0.9), -std::sin(0.9), std::sin(0.9), std::cos(0.9);
  EXPECT_LT((R - expect).norm(), 1e-12);
  EXPECT_LT((finite_difference_differential(S, rot, north, 1e-5) - R).norm(), 1e-8);

  const auto I = map_differential(S, make_map(Identity{}), north);
  EXPECT_EQ(I, Eigen::MatrixXd::Identity(2, 2));
}

TEST(Maps, AnalyticMatchesFiniteDifferences) {
  std::mt19937_64 rng(3);
  for (const auto& c : analytic_cases()) {
    const auto f = parse_map(c.map);
    const double step = 1e-5 * c.M.injectivity_radius();
    double worst = 0.0;
    for (int s = 0; s < 1000; ++s) {
      const auto x = random_point(c.M, rng);
      const Eigen::MatrixXd a = map_differential(c.M, f, x);
      const Eigen::MatrixXd d = finite_difference_differential(c.M, f, x, step);
      worst = std::max(worst, (a - d).cwiseAbs().maxCoeff() / std::max(1.0, a.cwiseAbs().maxCoeff()));
    }
    EXPECT_LT(worst, 1e-6) << c.map;
  }
}

TEST(Maps, ChainRuleThroughComposition) {
  std::mt19937_64 rng(5);
  for (const auto& c : analytic_cases()) {
    const auto f = parse_map(c.map);
    const auto ff = compose(c.M, f, f);
    for (int s = 0; s < 50; ++s) {
      const auto x = random_point(c.M, rng);
      const Eigen::MatrixXd chain = map_differential(c.M, f, map_eval(c.M, f, x)) * map_differential(c.M, f, x);
      const double scale = std::max(1.0, chain.cwiseAbs().maxCoeff());
      const Eigen::MatrixXd direct = finite_difference_differential(c.M, ff, x, 1e-5 * c.M.injectivity_radius());
      EXPECT_LT((chain - direct).cwiseAbs().maxCoeff() / scale, 1e-6) << c.map;
      EXPECT_LT((chain - map_differential(c.M, ff, x)).cwiseAbs().maxCoeff() / scale, 1e-12) << c.map;
      EXPECT_LT(distance(c.M, map_eval(c.M, ff, x), map_eval(c.M, f, map_eval(c.M, f, x))), 1e-12);
    }
  }
}

TEST(Maps, OperatorNormSup) {
  const auto C = ModelGeometry::circle();
  EXPECT_DOUBLE_EQ(operator_norm_sup(C, make_map(CirclePower{-4}), build_grid(C, 16)), 4.0);
  const auto T = torus2();
  Eigen::MatrixXi A(2, 2);
  A << 2, 1, 1, 1;
  const double sigma = Eigen::JacobiSVD<Eigen::MatrixXd>(A.cast<double>()).singularValues()(0);
  EXPECT_NEAR(operator_norm_sup(T, make_map(TorusLinear{A}), build_grid(T, 16)), sigma, 1e-12);
  const auto S = ModelGeometry::sphere2();
  EXPECT_DOUBLE_EQ(operator_norm_sup(S, make_map(Identity{}), build_grid(S, 16)), 1.0);
  // Refinement only adds nodes to the suspension grid, so the sup cannot drop.
  const auto f = make_map(SphereSuspension{3});
  EXPECT_LE(operator_norm_sup(S, f, build_grid(S, 16)), operator_norm_sup(S, f, build_grid(S, 64)) + 1e-12);
}

TEST(Maps, DescriptorRoundTrip) {
  for (const char* text : {"circle_power:3", "torus_linear:2,0,0,3", "sphere_rotation:0,0,1:1.57",
                           "sphere_reflection:0,0,1", "suspension:2", "identity"}) {
    const auto f = parse_map(text);
    const auto g = parse_map(describe_map(f));
    EXPECT_EQ(describe_map(f), describe_map(g)) << text;
  }
  EXPECT_THROW(parse_map("torus_linear:1,2,3"), ParseError);
  EXPECT_THROW(parse_map("torus_linear:1.5,0,0,1"), ParseError);
  EXPECT_THROW(parse_map("warp:2"), ParseError);
  EXPECT_THROW(parse_map("sphere_rotation:0,0,0:1"), ParseError);
}

TEST(Maps, CompatibilityChecks) {
  EXPECT_THROW(check_compatible(ModelGeometry::sphere2(), parse_map("circle_power:2")), UnsupportedManifold);
  EXPECT_THROW(check_compatible(ModelGeometry::circle(), parse_map("suspension:2")), UnsupportedManifold);
  EXPECT_THROW(check_compatible(torus2(), parse_map("torus_linear:1,0,0,0,1,0,0,0,1")), UnsupportedManifold);
  EXPECT_NO_THROW(check_compatible(torus2(), parse_map("identity")));
}

TEST(Maps, FamilyDegrees) {
  const auto S = ModelGeometry::sphere2();
  EXPECT_EQ(family_degree(S, parse_map("sphere_rotation:0,0,1:1")), 1);
  EXPECT_EQ(family_degree(S, parse_map("sphere_reflection:0,0,1")), -1);
  EXPECT_EQ(family_degree(S, parse_map("suspension:3")), 3);
  EXPECT_EQ(family_degree(ModelGeometry::circle(), parse_map("circle_power:-2")), -2);
}
