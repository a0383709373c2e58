#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lefschetz/geometry.hpp"

namespace lefschetz {

// z -> z^n on the circle (acts on the angle s / radius).
struct CirclePower {
  int n = 1;
};

// Integer matrix acting on angle coordinates 2*pi*x_i/P_i.
struct TorusLinear {
  Eigen::MatrixXi matrix;
};

struct SphereRotation {
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
  double angle = 0.0;
};

struct SphereReflection {
  Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();
};

// Two-point suspension of z -> z^n. In the stereographic coordinate
// R e^{i lambda}, R = tan(colatitude/2), the map is R^p e^{i n lambda} with
// p = max(|n|, 2), so the poles are superattracting fixed points.
struct SphereSuspension {
  int n = 2;
};

struct Identity {};

// Ambient-coordinate map. The optional Jacobian is expressed in the canonical
// frames at x and f(x); without it the differential falls back to finite
// differences.
struct GenericChartMap {
  std::string name = "generic";
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> eval;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> jacobian;
};

using MapFamily = std::variant<CirclePower, TorusLinear, SphereRotation, SphereReflection,
                               SphereSuspension, Identity, GenericChartMap>;

struct DifferentialMode {
  enum class Kind { Analytic, FiniteDifference };
  Kind kind = Kind::Analytic;
  // 0 selects the default 1e-5 * injectivity radius.
  double step = 0.0;
};

struct SmoothSelfMap {
  MapFamily family;
  DifferentialMode mode;
};

SmoothSelfMap make_map(MapFamily family);
SmoothSelfMap with_finite_differences(SmoothSelfMap f, double step = 0.0);

// Throws UnsupportedManifold when the family does not live on M.
void check_compatible(const ModelGeometry& M, const SmoothSelfMap& f);

ManifoldPoint map_eval(const ModelGeometry& M, const SmoothSelfMap& f, const ManifoldPoint& x);
// Matrix in the canonical frames at x and f(x).
Eigen::MatrixXd map_differential(const ModelGeometry& M, const SmoothSelfMap& f,
                                 const ManifoldPoint& x);
Eigen::MatrixXd finite_difference_differential(const ModelGeometry& M, const SmoothSelfMap& f,
                                               const ManifoldPoint& x, double step);
// Ambient pushforward of tangent vectors at x to tangent vectors at f(x).
Eigen::MatrixXd map_pushforward(const ModelGeometry& M, const SmoothSelfMap& f,
                                const ManifoldPoint& x);

struct QuadratureGrid;
double operator_norm_sup(const ModelGeometry& M, const SmoothSelfMap& f,
                         const QuadratureGrid& grid);

SmoothSelfMap compose(const ModelGeometry& M, const SmoothSelfMap& outer,
                      const SmoothSelfMap& inner);

// Degree for built-in families; nullopt for generic maps.
std::optional<int> family_degree(const ModelGeometry& M, const SmoothSelfMap& f);

SmoothSelfMap parse_map(const std::string& descriptor);
std::string describe_map(const SmoothSelfMap& f);

// Comma-separated numbers; throws ParseError.
std::vector<double> parse_numbers(const std::string& text);
// 17 significant digits, '.' separator, independent of the global locale.
std::string format_number(double x);

Eigen::Matrix3d rotation_matrix(const Eigen::Vector3d& axis, double angle);

}  // namespace lefschetz
