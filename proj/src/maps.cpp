#include "lefschetz/maps.hpp"

#include <cmath>
#include <sstream>

#include "lefschetz/errors.hpp"
#include "lefschetz/quadrature.hpp"

namespace lefschetz {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

int suspension_power(int n) { return std::max(std::abs(n), 2); }

struct SuspensionChart {
  double g = 0.0;        // conformal stretch factor
  Eigen::Vector3d image;
  Eigen::Vector3d ec, el;    // colatitude / longitude directions at x
  Eigen::Vector3d ec2, el2;  // same at f(x)
  bool pole = false;
};

SuspensionChart suspension_chart(const SphereSuspension& s, const Eigen::Vector3d& x) {
  SuspensionChart out;
  const double rho = std::hypot(x(0), x(1));
  if (rho == 0.0) {
    out.pole = true;
    out.image = x;
    return out;
  }
  const int p = suspension_power(s.n);
  const bool north = x(2) >= 0.0;
  // T = tan(colat/2) in the north, its reciprocal in the south.
  const double T = north ? rho / (1.0 + x(2)) : rho / (1.0 - x(2));
  const double Tp = std::pow(T, p);
  const double cos2 = (1.0 - Tp * Tp) / (1.0 + Tp * Tp) * (north ? 1.0 : -1.0);
  const double sin2 = 2.0 * Tp / (1.0 + Tp * Tp);
  out.g = std::pow(T, p - 1) * (1.0 + T * T) / (1.0 + Tp * Tp);
  const double lam = std::atan2(x(1), x(0));
  const double lam2 = s.n * lam;
  out.image = Eigen::Vector3d(sin2 * std::cos(lam2), sin2 * std::sin(lam2), cos2);
  const double cosc = x(2), sinc = rho;
  out.ec = Eigen::Vector3d(cosc * std::cos(lam), cosc * std::sin(lam), -sinc);
  out.el = Eigen::Vector3d(-std::sin(lam), std::cos(lam), 0.0);
  out.ec2 = Eigen::Vector3d(cos2 * std::cos(lam2), cos2 * std::sin(lam2), -sin2);
  out.el2 = Eigen::Vector3d(-std::sin(lam2), std::cos(lam2), 0.0);
  return out;
}

double default_step(const ModelGeometry& M) {
  const double inj = M.injectivity_radius();
  return 1e-5 * (std::isfinite(inj) ? inj : 1.0);
}

int parse_int(const std::string& text) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used != text.size()) throw ParseError("bad integer '" + text + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ParseError("bad integer '" + text + "'");
  }
}

Eigen::Vector3d parse_vec3(const std::string& text) {
  const auto v = parse_numbers(text);
  if (v.size() != 3) throw ParseError("expected a 3-vector, got '" + text + "'");
  Eigen::Vector3d out(v[0], v[1], v[2]);
  if (out.norm() == 0.0) throw ParseError("zero axis");
  return out.normalized();
}


}  // namespace

std::vector<double> parse_numbers(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw ParseError("bad number '" + item + "'");
    } catch (const std::logic_error&) {
      throw ParseError("bad number '" + item + "'");
    }
  }
  return out;
}

std::string format_number(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << v;
  return os.str();
}

Eigen::Matrix3d rotation_matrix(const Eigen::Vector3d& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

SmoothSelfMap make_map(MapFamily family) { return {std::move(family), {}}; }

SmoothSelfMap with_finite_differences(SmoothSelfMap f, double step) {
  f.mode = {DifferentialMode::Kind::FiniteDifference, step};
  return f;
}

void check_compatible(const ModelGeometry& M, const SmoothSelfMap& f) {
  const bool sphere = M.kind() == GeometryKind::Sphere2;
  const bool ok = std::visit(
      overloaded{
          [&](const CirclePower&) { return M.is_flat() && M.dimension() == 1; },
          [&](const TorusLinear& t) {
            return M.is_flat() && t.matrix.rows() == M.dimension() &&
                   t.matrix.cols() == M.dimension();
          },
          [&](const SphereRotation&) { return sphere; },
          [&](const SphereReflection&) { return sphere; },
          [&](const SphereSuspension&) { return sphere; },
          [&](const Identity&) { return true; },
          [&](const GenericChartMap& g) { return static_cast<bool>(g.eval); },
      },
      f.family);
  if (!ok)
    throw UnsupportedManifold("map '" + describe_map(f) + "' does not act on " +
                              to_string(M.kind()));
}

ManifoldPoint map_eval(const ModelGeometry& M, const SmoothSelfMap& f, const ManifoldPoint& x) {
  return std::visit(
      overloaded{
          [&](const CirclePower& c) {
            return make_point(M, Eigen::VectorXd::Constant(1, c.n * x.coords(0)));
          },
          [&](const TorusLinear& t) {
            const auto& P = M.periods();
            Eigen::VectorXd y = Eigen::VectorXd::Zero(x.coords.size());
            for (int i = 0; i < y.size(); ++i)
              for (int j = 0; j < y.size(); ++j) y(i) += t.matrix(i, j) * x.coords(j) * P[i] / P[j];
            return make_point(M, y);
          },
          [&](const SphereRotation& r) {
            return make_point(M, rotation_matrix(r.axis, r.angle) * Eigen::Vector3d(x.coords));
          },
          [&](const SphereReflection& r) {
            const Eigen::Vector3d n = r.normal.normalized();
            const Eigen::Vector3d p = x.coords;
            return make_point(M, p - 2.0 * n.dot(p) * n);
          },
          [&](const SphereSuspension& s) {
            return make_point(M, suspension_chart(s, x.coords).image);
          },
          [&](const Identity&) { return x; },
          [&](const GenericChartMap& g) { return from_ambient(M, g.eval(ambient(M, x))); },
      },
      f.family);
}

Eigen::MatrixXd finite_difference_differential(const ModelGeometry& M, const SmoothSelfMap& f,
                                               const ManifoldPoint& x, double step) {
  const double h = step > 0 ? step : default_step(M);
  const ManifoldPoint fx = map_eval(M, f, x);
  const Eigen::MatrixXd Fx = tangent_frame(M, x);
  const Eigen::MatrixXd Fy = tangent_frame(M, fx);
  const Eigen::MatrixXd G = ambient_metric(M);
  const int n = M.dimension();
  Eigen::MatrixXd D(n, n);
  for (int i = 0; i < n; ++i) {
    const ManifoldPoint yp = map_eval(M, f, exp_map(M, x, h * Fx.col(i)));
    const ManifoldPoint ym = map_eval(M, f, exp_map(M, x, -h * Fx.col(i)));
    const Eigen::VectorXd diff = log_map(M, fx, yp) - log_map(M, fx, ym);
    D.col(i) = Fy.transpose() * G * diff / (2.0 * h);
  }
  return D;
}

Eigen::MatrixXd map_pushforward(const ModelGeometry& M, const SmoothSelfMap& f,
                                const ManifoldPoint& x) {
  const ManifoldPoint fx = map_eval(M, f, x);
  return tangent_frame(M, fx) * map_differential(M, f, x) * tangent_frame(M, x).transpose() *
         ambient_metric(M);
}

Eigen::MatrixXd map_differential(const ModelGeometry& M, const SmoothSelfMap& f,
                                 const ManifoldPoint& x) {
  if (f.mode.kind == DifferentialMode::Kind::FiniteDifference)
    return finite_difference_differential(M, f, x, f.mode.step);
  const int n = M.dimension();
  auto in_frames = [&](const Eigen::Matrix3d& J) -> Eigen::MatrixXd {
    const ManifoldPoint fx = map_eval(M, f, x);
    return tangent_frame(M, fx).transpose() * J * tangent_frame(M, x);
  };
  return std::visit(
      overloaded{
          [&](const CirclePower& c) -> Eigen::MatrixXd {
            return Eigen::MatrixXd::Constant(1, 1, c.n);
          },
          [&](const TorusLinear& t) -> Eigen::MatrixXd {
            const auto& P = M.periods();
            Eigen::MatrixXd D(n, n);
            for (int i = 0; i < n; ++i)
              for (int j = 0; j < n; ++j) D(i, j) = t.matrix(i, j) * P[i] / P[j];
            return D;
          },
          [&](const SphereRotation& r) -> Eigen::MatrixXd {
            return in_frames(rotation_matrix(r.axis, r.angle));
          },
          [&](const SphereReflection& r) -> Eigen::MatrixXd {
            const Eigen::Vector3d nn = r.normal.normalized();
            return in_frames(Eigen::Matrix3d::Identity() - 2.0 * nn * nn.transpose());
          },
          [&](const SphereSuspension& s) -> Eigen::MatrixXd {
            const SuspensionChart c = suspension_chart(s, x.coords);
            if (c.pole) return Eigen::MatrixXd::Zero(2, 2);
            const double p = suspension_power(s.n);
            const Eigen::Matrix3d J =
                c.g * (p * c.ec2 * c.ec.transpose() + s.n * c.el2 * c.el.transpose());
            return in_frames(J);
          },
          [&](const Identity&) -> Eigen::MatrixXd { return Eigen::MatrixXd::Identity(n, n); },
          [&](const GenericChartMap& g) -> Eigen::MatrixXd {
            if (g.jacobian) return g.jacobian(ambient(M, x));
            return finite_difference_differential(M, f, x, f.mode.step);
          },
      },
      f.family);
}

double operator_norm_sup(const ModelGeometry& M, const SmoothSelfMap& f,
                         const QuadratureGrid& grid) {
  double best = 0.0;
  for (const auto& p : grid.points) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(map_differential(M, f, p));
    best = std::max(best, svd.singularValues()(0));
  }
  return best;
}

SmoothSelfMap compose(const ModelGeometry& M, const SmoothSelfMap& outer,
                      const SmoothSelfMap& inner) {
  GenericChartMap g;
  g.name = describe_map(outer) + "∘" + describe_map(inner);
  g.eval = [M, outer, inner](const Eigen::VectorXd& a) {
    return ambient(M, map_eval(M, outer, map_eval(M, inner, from_ambient(M, a))));
  };
  g.jacobian = [M, outer, inner](const Eigen::VectorXd& a) -> Eigen::MatrixXd {
    const ManifoldPoint x = from_ambient(M, a);
    return map_differential(M, outer, map_eval(M, inner, x)) * map_differential(M, inner, x);
  };
  return make_map(g);
}

std::optional<int> family_degree(const ModelGeometry& M, const SmoothSelfMap& f) {
  (void)M;
  return std::visit(
      overloaded{
          [](const CirclePower& c) -> std::optional<int> { return c.n; },
          [](const TorusLinear& t) -> std::optional<int> {
            return static_cast<int>(std::lround(t.matrix.cast<double>().determinant()));
          },
          [](const SphereRotation&) -> std::optional<int> { return 1; },
          [](const SphereReflection&) -> std::optional<int> { return -1; },
          [](const SphereSuspension& s) -> std::optional<int> { return s.n; },
          [](const Identity&) -> std::optional<int> { return 1; },
          [](const GenericChartMap&) -> std::optional<int> { return std::nullopt; },
      },
      f.family);
}

SmoothSelfMap parse_map(const std::string& descriptor) {
  const auto colon = descriptor.find(':');
  const std::string head = descriptor.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : descriptor.substr(colon + 1);
  if (head == "identity") {
    if (!rest.empty()) throw ParseError("identity takes no arguments");
    return make_map(Identity{});
  }
  if (rest.empty()) throw ParseError("map '" + head + "' needs arguments");
  if (head == "circle_power") return make_map(CirclePower{parse_int(rest)});
  if (head == "suspension") return make_map(SphereSuspension{parse_int(rest)});
  if (head == "torus_linear") {
    const auto v = parse_numbers(rest);
    const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(v.size()))));
    if (n < 1 || n > 3 || static_cast<std::size_t>(n * n) != v.size())
      throw ParseError("torus_linear needs 1, 4 or 9 entries");
    TorusLinear t;
    t.matrix.resize(n, n);
    for (int i = 0; i < n * n; ++i) {
      if (v[i] != std::round(v[i])) throw ParseError("torus_linear entries must be integers");
      t.matrix(i / n, i % n) = static_cast<int>(v[i]);
    }
    return make_map(t);
  }
  if (head == "sphere_rotation") {
    const auto split = rest.find(':');
    if (split == std::string::npos) throw ParseError("sphere_rotation needs axis:angle");
    SphereRotation r;
    r.axis = parse_vec3(rest.substr(0, split));
    const auto angle = parse_numbers(rest.substr(split + 1));
    if (angle.size() != 1) throw ParseError("sphere_rotation angle must be one number");
    r.angle = angle[0];
    return make_map(r);
  }
  if (head == "sphere_reflection") return make_map(SphereReflection{parse_vec3(rest)});
  throw ParseError("unknown map '" + head + "'");
}

std::string describe_map(const SmoothSelfMap& f) {
  auto vec = [](const Eigen::Vector3d& v) {
    return format_number(v(0)) + "," + format_number(v(1)) + "," + format_number(v(2));
  };
  return std::visit(
      overloaded{
          [](const CirclePower& c) { return "circle_power:" + std::to_string(c.n); },
          [](const TorusLinear& t) {
            std::string s = "torus_linear:";
            for (int i = 0; i < t.matrix.rows(); ++i)
              for (int j = 0; j < t.matrix.cols(); ++j)
                s += (i + j > 0 ? "," : "") + std::to_string(t.matrix(i, j));
            return s;
          },
          [&](const SphereRotation& r) {
            return "sphere_rotation:" + vec(r.axis) + ":" + format_number(r.angle);
          },
          [&](const SphereReflection& r) { return "sphere_reflection:" + vec(r.normal); },
          [](const SphereSuspension& s) { return "suspension:" + std::to_string(s.n); },
          [](const Identity&) { return std::string("identity"); },
          [](const GenericChartMap& g) { return g.name; },
      },
      f.family);
}

}  // namespace lefschetz
