#pragma once

#include <Eigen/Dense>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

namespace lefschetz {

enum class GeometryKind { Circle, FlatTorus, Sphere2, HyperbolicPatch2 };

// Chart coordinates. Circle/torus: arc-length coordinates in [0, period).
// Sphere: unit 3-vector. Hyperbolic patch: (X1, X2) of the hyperboloid model.
struct ManifoldPoint {
  Eigen::VectorXd coords;
};

// Components are ambient: n-vector on flat geometries, 3-vector otherwise
// (Euclidean-orthogonal to the base on the sphere, Minkowski-orthogonal on
// the hyperboloid).
struct TangentVector {
  ManifoldPoint base;
  Eigen::VectorXd components;
};

class ModelGeometry {
 public:
  static ModelGeometry circle(double radius = 1.0);
  static ModelGeometry flat_torus(std::vector<double> periods);
  static ModelGeometry sphere2();
  static ModelGeometry hyperbolic_patch();

  GeometryKind kind() const { return kind_; }
  int dimension() const;
  int ambient_dimension() const;
  double curvature() const;
  double injectivity_radius() const;
  std::optional<double> volume() const;
  int euler_characteristic() const;
  bool is_flat() const { return kind_ == GeometryKind::Circle || kind_ == GeometryKind::FlatTorus; }
  // Periods of the flat coordinates (circle: circumference).
  const std::vector<double>& periods() const { return periods_; }
  double radius() const { return radius_; }

  nlohmann::json to_json() const;
  static ModelGeometry from_json(const nlohmann::json& j);
  bool operator==(const ModelGeometry& other) const = default;

 private:
  GeometryKind kind_ = GeometryKind::Sphere2;
  std::vector<double> periods_;
  double radius_ = 1.0;
};

struct GeodesicData {
  ManifoldPoint x;
  ManifoldPoint y;
  double distance = 0.0;
  ManifoldPoint midpoint;
  TangentVector unit_tangent_at_midpoint;
  // Unit tangents of the geodesic at its endpoints (zero when x == y).
  Eigen::VectorXd tangent_at_x;
  Eigen::VectorXd tangent_at_y;
  // Parallel translation from y to x in the canonical frames at y and x.
  Eigen::MatrixXd transport_y_to_x;
};

ManifoldPoint make_point(const ModelGeometry& M, const Eigen::VectorXd& coords);
// Ambient representative: coordinates on flat geometries, embedding otherwise.
Eigen::VectorXd ambient(const ModelGeometry& M, const ManifoldPoint& x);
ManifoldPoint from_ambient(const ModelGeometry& M, const Eigen::VectorXd& a);
// Bilinear form of the ambient space (identity, or Minkowski diag(-1,1,1)).
Eigen::MatrixXd ambient_metric(const ModelGeometry& M);

// Canonical positively oriented orthonormal frame at x, as ambient columns.
Eigen::MatrixXd tangent_frame(const ModelGeometry& M, const ManifoldPoint& x);
// Orthonormal frame whose first column is the given unit tangent, same orientation.
Eigen::MatrixXd adapted_frame(const ModelGeometry& M, const ManifoldPoint& x,
                              const Eigen::VectorXd& first);

ManifoldPoint exp_map(const ModelGeometry& M, const TangentVector& v);
ManifoldPoint exp_map(const ModelGeometry& M, const ManifoldPoint& x, const Eigen::VectorXd& v);
// Ambient tangent at x with exp_x(log) = y; throws CutLocusViolation on C_x.
Eigen::VectorXd log_map(const ModelGeometry& M, const ManifoldPoint& x, const ManifoldPoint& y);
double distance(const ModelGeometry& M, const ManifoldPoint& x, const ManifoldPoint& y);

GeodesicData geodesic_between(const ModelGeometry& M, const ManifoldPoint& x,
                              const ManifoldPoint& y);
TangentVector parallel_transport(const ModelGeometry& M, const GeodesicData& g,
                                 const TangentVector& w);
// Ambient linear map carrying tangent vectors at g.y to g.x.
Eigen::MatrixXd transport_matrix_ambient(const ModelGeometry& M, const GeodesicData& g);

double cut_margin(const ModelGeometry& M, const ManifoldPoint& x, const ManifoldPoint& y);
// Distance from x to C_x along the unit ambient direction u.
double directional_cut_distance(const ModelGeometry& M, const ManifoldPoint& x,
                                const Eigen::VectorXd& u);
bool tube_membership(const ModelGeometry& M, const ManifoldPoint& x, const ManifoldPoint& y,
                     double epsilon);

double tangent_norm(const ModelGeometry& M, const Eigen::VectorXd& v);
double tangent_dot(const ModelGeometry& M, const Eigen::VectorXd& a, const Eigen::VectorXd& b);

std::string to_string(GeometryKind kind);

}  // namespace lefschetz
