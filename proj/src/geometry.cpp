#include "lefschetz/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lefschetz/errors.hpp"

namespace lefschetz {

namespace {

constexpr double kPi = std::numbers::pi;

double minkowski(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return -a(0) * b(0) + a(1) * b(1) + a(2) * b(2);
}

double wrap(double delta, double period) { return std::remainder(delta, period); }

double reduce(double value, double period) {
  double r = std::fmod(value, period);
  if (r < 0) r += period;
  if (r >= period) r -= period;
  return r;
}

Eigen::VectorXd flat_delta(const ModelGeometry& M, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& y) {
  Eigen::VectorXd d(x.size());
  for (int i = 0; i < x.size(); ++i) d(i) = wrap(y(i) - x(i), M.periods()[i]);
  return d;
}

// Rotation of R^n whose first column is c (unit), determinant +1.
Eigen::MatrixXd completed_basis(const Eigen::VectorXd& c) {
  const int n = static_cast<int>(c.size());
  Eigen::MatrixXd Q(n, n);
  Q.col(0) = c;
  int filled = 1;
  for (int k = 0; k < n && filled < n; ++k) {
    Eigen::VectorXd e = Eigen::VectorXd::Unit(n, k);
    for (int j = 0; j < filled; ++j) e -= Q.col(j).dot(e) * Q.col(j);
    if (e.norm() > 1e-6) Q.col(filled++) = e.normalized();
  }
  if (n > 1 && Q.determinant() < 0) Q.col(n - 1) *= -1.0;
  return Q;
}

}  // namespace

ModelGeometry ModelGeometry::circle(double radius) {
  if (!(radius > 0)) throw ParseError("circle radius must be positive");
  ModelGeometry M;
  M.kind_ = GeometryKind::Circle;
  M.radius_ = radius;
  M.periods_ = {2 * kPi * radius};
  return M;
}

ModelGeometry ModelGeometry::flat_torus(std::vector<double> periods) {
  if (periods.empty() || periods.size() > 3) throw ParseError("torus dimension must be 1..3");
  for (double p : periods)
    if (!(p > 0)) throw ParseError("torus periods must be positive");
  ModelGeometry M;
  M.kind_ = GeometryKind::FlatTorus;
  M.periods_ = std::move(periods);
  return M;
}

ModelGeometry ModelGeometry::sphere2() {
  ModelGeometry M;
  M.kind_ = GeometryKind::Sphere2;
  return M;
}

ModelGeometry ModelGeometry::hyperbolic_patch() {
  ModelGeometry M;
  M.kind_ = GeometryKind::HyperbolicPatch2;
  return M;
}

int ModelGeometry::dimension() const {
  return is_flat() ? static_cast<int>(periods_.size()) : 2;
}

int ModelGeometry::ambient_dimension() const { return is_flat() ? dimension() : 3; }

double ModelGeometry::curvature() const {
  switch (kind_) {
    case GeometryKind::Sphere2: return 1.0;
    case GeometryKind::HyperbolicPatch2: return -1.0;
    default: return 0.0;
  }
}

double ModelGeometry::injectivity_radius() const {
  switch (kind_) {
    case GeometryKind::Circle: return kPi * radius_;
    case GeometryKind::FlatTorus: return *std::min_element(periods_.begin(), periods_.end()) / 2;
    case GeometryKind::Sphere2: return kPi;
    case GeometryKind::HyperbolicPatch2: return std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

std::optional<double> ModelGeometry::volume() const {
  switch (kind_) {
    case GeometryKind::Circle:
    case GeometryKind::FlatTorus: {
      double v = 1.0;
      for (double p : periods_) v *= p;
      return v;
    }
    case GeometryKind::Sphere2: return 4 * kPi;
    case GeometryKind::HyperbolicPatch2: return std::nullopt;
  }
  return std::nullopt;
}

int ModelGeometry::euler_characteristic() const {
  switch (kind_) {
    case GeometryKind::Sphere2: return 2;
    case GeometryKind::HyperbolicPatch2: return 1;
    default: return 0;
  }
}

nlohmann::json ModelGeometry::to_json() const {
  switch (kind_) {
    case GeometryKind::Circle: return {{"kind", "circle"}, {"radius", radius_}};
    case GeometryKind::FlatTorus: return {{"kind", "torus"}, {"periods", periods_}};
    case GeometryKind::Sphere2: return {{"kind", "sphere2"}};
    case GeometryKind::HyperbolicPatch2: return {{"kind", "hyperbolic_patch"}};
  }
  return {};
}

ModelGeometry ModelGeometry::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) throw ParseError("geometry descriptor needs a kind");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "circle") return circle(j.value("radius", 1.0));
  if (kind == "torus") {
    if (!j.contains("periods")) return flat_torus({2 * kPi, 2 * kPi});
    return flat_torus(j.at("periods").get<std::vector<double>>());
  }
  if (kind == "sphere2") return sphere2();
  if (kind == "hyperbolic_patch") return hyperbolic_patch();
  throw ParseError("unknown geometry kind '" + kind + "'");
}

std::string to_string(GeometryKind kind) {
  switch (kind) {
    case GeometryKind::Circle: return "circle";
    case GeometryKind::FlatTorus: return "torus";
    case GeometryKind::Sphere2: return "sphere2";
    case GeometryKind::HyperbolicPatch2: return "hyperbolic_patch";
  }
  return "?";
}

ManifoldPoint make_point(const ModelGeometry& M, const Eigen::VectorXd& coords) {
  ManifoldPoint p;
  switch (M.kind()) {
    case GeometryKind::Circle:
    case GeometryKind::FlatTorus:
      if (coords.size() != M.dimension()) throw BaseMismatch("coordinate count mismatch");
      p.coords.resize(coords.size());
      for (int i = 0; i < coords.size(); ++i) p.coords(i) = reduce(coords(i), M.periods()[i]);
      break;
    case GeometryKind::Sphere2:
      if (coords.size() != 3) throw BaseMismatch("sphere points are 3-vectors");
      p.coords = coords.normalized();
      break;
    case GeometryKind::HyperbolicPatch2:
      if (coords.size() != 2) throw BaseMismatch("hyperbolic chart points are 2-vectors");
      p.coords = coords;
      break;
  }
  return p;
}

Eigen::VectorXd ambient(const ModelGeometry& M, const ManifoldPoint& x) {
  if (M.kind() != GeometryKind::HyperbolicPatch2) return x.coords;
  Eigen::VectorXd a(3);
  a << std::sqrt(1.0 + x.coords.squaredNorm()), x.coords(0), x.coords(1);
  return a;
}

ManifoldPoint from_ambient(const ModelGeometry& M, const Eigen::VectorXd& a) {
  if (M.kind() == GeometryKind::HyperbolicPatch2) return make_point(M, a.tail(2));
  return make_point(M, a);
}

Eigen::MatrixXd ambient_metric(const ModelGeometry& M) {
  Eigen::MatrixXd G = Eigen::MatrixXd::Identity(M.ambient_dimension(), M.ambient_dimension());
  if (M.kind() == GeometryKind::HyperbolicPatch2) G(0, 0) = -1.0;
  return G;
}

double tangent_dot(const ModelGeometry& M, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return M.kind() == GeometryKind::HyperbolicPatch2 ? minkowski(a, b) : a.dot(b);
}

double tangent_norm(const ModelGeometry& M, const Eigen::VectorXd& v) {
  return std::sqrt(std::max(0.0, tangent_dot(M, v, v)));
}

Eigen::MatrixXd tangent_frame(const ModelGeometry& M, const ManifoldPoint& x) {
  const int n = M.dimension();
  if (M.is_flat()) return Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd F(3, 2);
  if (M.kind() == GeometryKind::Sphere2) {
    const Eigen::Vector3d p = x.coords;
    Eigen::Vector3d ref = std::abs(p(2)) > 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitZ();
    Eigen::Vector3d e1 = (ref - ref.dot(p) * p).normalized();
    F.col(0) = e1;
    F.col(1) = p.cross(e1);
    return F;
  }
  const Eigen::VectorXd X = ambient(M, x);
  Eigen::VectorXd e1 = Eigen::Vector3d::UnitY();
  e1 += minkowski(X, e1) * X;
  e1 /= std::sqrt(minkowski(e1, e1));
  Eigen::VectorXd e2 = Eigen::Vector3d::UnitZ();
  e2 += minkowski(X, e2) * X;
  e2 -= minkowski(e1, e2) * e1;
  e2 /= std::sqrt(minkowski(e2, e2));
  F.col(0) = e1;
  F.col(1) = e2;
  return F;
}

Eigen::MatrixXd adapted_frame(const ModelGeometry& M, const ManifoldPoint& x,
                              const Eigen::VectorXd& first) {
  const Eigen::MatrixXd F = tangent_frame(M, x);
  const Eigen::MatrixXd G = ambient_metric(M);
  Eigen::VectorXd c = F.transpose() * G * first;
  c.normalize();
  return F * completed_basis(c);
}

ManifoldPoint exp_map(const ModelGeometry& M, const ManifoldPoint& x, const Eigen::VectorXd& v) {
  switch (M.kind()) {
    case GeometryKind::Circle:
    case GeometryKind::FlatTorus: return make_point(M, x.coords + v);
    case GeometryKind::Sphere2: {
      const double s = v.norm();
      if (s == 0.0) return x;
      return make_point(M, std::cos(s) * x.coords + std::sin(s) * (v / s));
    }
    case GeometryKind::HyperbolicPatch2: {
      const Eigen::VectorXd X = ambient(M, x);
      const double s = tangent_norm(M, v);
      if (s == 0.0) return x;
      return from_ambient(M, std::cosh(s) * X + std::sinh(s) * (v / s));
    }
  }
  return x;
}

ManifoldPoint exp_map(const ModelGeometry& M, const TangentVector& v) {
  return exp_map(M, v.base, v.components);
}

double distance(const ModelGeometry& M, const ManifoldPoint& x, const ManifoldPoint& y) {
  switch (M.kind()) {
    case GeometryKind::Circle:
    case GeometryKind::FlatTorus: return flat_delta(M, x.coords, y.coords).norm();
    case GeometryKind::Sphere2: {
      const Eigen::Vector3d a = x.coords, b = y.coords;
      return std::atan2(a.cross(b).norm(), a.dot(b));
    }
    case GeometryKind::HyperbolicPatch2: {
      const Eigen::VectorXd X = ambient(M, x), Y = ambient(M, y);
      const Eigen::VectorXd diff = Y - X;
      // asinh form stays accurate for nearby points.
      const double chord = std::sqrt(std::max(0.0, minkowski(diff, diff)));
      return 2.0 * std::asinh(chord / 2.0);
    }
  }
  return 0.0;
}

double cut_margin(const ModelGeometry& M, const ManifoldPoint& x, const ManifoldPoint& y) {
  switch (M.kind()) {
    case GeometryKind::Circle: return M.injectivity_radius() - distance(M, x, y);
    case GeometryKind::FlatTorus: {
      const Eigen::VectorXd d = flat_delta(M, x.coords, y.coords);
      double m = std::numeric_limits<double>::infinity();
      for (int i = 0; i < d.size(); ++i) m = std::min(m, M.periods()[i] / 2 - std::abs(d(i)));
      return m;
    }
    case GeometryKind::Sphere2: return kPi - distance(M, x, y);
    case GeometryKind::HyperbolicPatch2: return std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

double directional_cut_distance(const ModelGeometry& M, const ManifoldPoint& x,
                                const Eigen::VectorXd& u) {
  (void)x;
  switch (M.kind()) {
    case GeometryKind::Circle:
    case GeometryKind::FlatTorus: {
      double D = std::numeric_limits<double>::infinity();
      for (int i = 0; i < u.size(); ++i)
        if (u(i) != 0.0) D = std::min(D, M.periods()[i] / 2 / std::abs(u(i)));
      return D;
    }
    case GeometryKind::Sphere2: return kPi;
    case GeometryKind::HyperbolicPatch2: return std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

Eigen::VectorXd log_map(const ModelGeometry& M, const ManifoldPoint& x, const ManifoldPoint& y) {
  if (!(cut_margin(M, x, y) > 0)) throw CutLocusViolation("target lies on the cut locus of the base");
  switch (M.kind()) {
    case GeometryKind::Circle:
    case GeometryKind::FlatTorus: return flat_delta(M, x.coords, y.coords);
    case GeometryKind::Sphere2: {
      const Eigen::Vector3d a = x.coords, b = y.coords;
      const double d = distance(M, x, y);
      Eigen::Vector3d u = b - a.dot(b) * a;
      const double s = u.norm();
      if (d == 0.0 || s == 0.0) return Eigen::Vector3d::Zero();
      return (d / s) * u;
    }
    case GeometryKind::HyperbolicPatch2: {
      const Eigen::VectorXd X = ambient(M, x), Y = ambient(M, y);
      const double d = distance(M, x, y);
      Eigen::VectorXd u = Y + minkowski(X, Y) * X;
      const double s = std::sqrt(std::max(0.0, minkowski(u, u)));
      if (d == 0.0 || s == 0.0) return Eigen::VectorXd::Zero(3);
      return (d / s) * u;
    }
  }
  return {};
}

GeodesicData geodesic_between(const ModelGeometry& M, const ManifoldPoint& x,
                              const ManifoldPoint& y) {
  GeodesicData g;
  g.x = x;
  g.y = y;
  const Eigen::VectorXd v = log_map(M, x, y);
  const double d = tangent_norm(M, v);
  g.distance = d;
  const int amb = M.ambient_dimension();
  if (d == 0.0) {
    g.midpoint = x;
    g.tangent_at_x = Eigen::VectorXd::Zero(amb);
    g.tangent_at_y = Eigen::VectorXd::Zero(amb);
    g.unit_tangent_at_midpoint = {x, Eigen::VectorXd::Zero(amb)};
    g.transport_y_to_x = Eigen::MatrixXd::Identity(M.dimension(), M.dimension());
    return g;
  }
  const Eigen::VectorXd u = v / d;
  g.tangent_at_x = u;
  g.midpoint = exp_map(M, x, v / 2);
  const Eigen::VectorXd X = ambient(M, x);
  Eigen::VectorXd tm, ty;
  switch (M.kind()) {
    case GeometryKind::Sphere2:
      tm = -std::sin(d / 2) * X + std::cos(d / 2) * u;
      ty = -std::sin(d) * X + std::cos(d) * u;
      break;
    case GeometryKind::HyperbolicPatch2:
      tm = std::sinh(d / 2) * X + std::cosh(d / 2) * u;
      ty = std::sinh(d) * X + std::cosh(d) * u;
      break;
    default:
      tm = u;
      ty = u;
  }
  g.unit_tangent_at_midpoint = {g.midpoint, tm};
  g.tangent_at_y = ty;
  const Eigen::MatrixXd P = transport_matrix_ambient(M, g);
  g.transport_y_to_x = tangent_frame(M, x).transpose() * ambient_metric(M) * P * tangent_frame(M, y);
  return g;
}

Eigen::MatrixXd transport_matrix_ambient(const ModelGeometry& M, const GeodesicData& g) {
  const int amb = M.ambient_dimension();
  if (M.is_flat() || g.distance == 0.0) return Eigen::MatrixXd::Identity(amb, amb);
  // P(w) = w - <log_y x, w>/d^2 (log_y x + log_x y), valid on both model spaces.
  const double d = g.distance;
  const Eigen::VectorXd lyx = -d * g.tangent_at_y;
  const Eigen::VectorXd lxy = d * g.tangent_at_x;
  const Eigen::MatrixXd G = ambient_metric(M);
  return Eigen::MatrixXd::Identity(amb, amb) - (lyx + lxy) * (G * lyx).transpose() / (d * d);
}

TangentVector parallel_transport(const ModelGeometry& M, const GeodesicData& g,
                                 const TangentVector& w) {
  if ((ambient(M, w.base) - ambient(M, g.y)).norm() > 1e-10)
    throw BaseMismatch("vector is not based at the geodesic endpoint");
  return {g.x, transport_matrix_ambient(M, g) * w.components};
}

bool tube_membership(const ModelGeometry& M, const ManifoldPoint& x, const ManifoldPoint& y,
                     double epsilon) {
  return distance(M, x, y) < std::sqrt(2.0) * epsilon;
}

}  // namespace lefschetz
