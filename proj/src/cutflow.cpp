#include "lefschetz/cutflow.hpp"

#include <cmath>
#include <deque>
#include <numbers>

#include "lefschetz/errors.hpp"
#include "lefschetz/integrand.hpp"
#include "lefschetz/oracles.hpp"

namespace lefschetz {

namespace {

constexpr double kPi = std::numbers::pi;

long long mod(long long a, long long m) { return ((a % m) + m) % m; }

// Least-squares polynomial in t (degree up to 2) evaluated at t = 0.
double extrapolate_to_zero(const std::vector<double>& t, const std::vector<double>& v) {
  const int m = static_cast<int>(t.size());
  const int degree = std::min(2, m - 1);
  Eigen::MatrixXd V(m, degree + 1);
  Eigen::VectorXd y(m);
  for (int i = 0; i < m; ++i) {
    for (int d = 0; d <= degree; ++d) V(i, d) = std::pow(t[i], d);
    y(i) = v[i];
  }
  return V.colPivHouseholderQr().solve(y)(0);
}

// Normalized distance d(x, f(x)) / (cut distance in that direction); 1 on C(f).
double cut_fraction(const ModelGeometry& M, const ManifoldPoint& x, const ManifoldPoint& y) {
  if (cut_margin(M, x, y) <= 0) return 1.0;
  const Eigen::VectorXd v = log_map(M, x, y);
  const double len = tangent_norm(M, v);
  if (len == 0.0) return 0.0;
  return len / directional_cut_distance(M, x, v / len);
}

// Exact lattice margins for integer linear maps on uniform flat grids.
std::optional<std::vector<double>> lattice_margins(const ModelGeometry& M,
                                                   const SmoothSelfMap& f,
                                                   const QuadratureGrid& grid) {
  if (!M.is_flat()) return std::nullopt;
  Eigen::MatrixXi A;
  if (const auto* c = std::get_if<CirclePower>(&f.family)) {
    A = Eigen::MatrixXi::Constant(1, 1, c->n - 1);
  } else if (const auto* t = std::get_if<TorusLinear>(&f.family)) {
    A = t->matrix - Eigen::MatrixXi::Identity(t->matrix.rows(), t->matrix.cols());
  } else if (std::holds_alternative<Identity>(f.family)) {
    A = Eigen::MatrixXi::Zero(M.dimension(), M.dimension());
  } else {
    return std::nullopt;
  }
  const int n = M.dimension();
  const long long N = grid.resolution;
  std::vector<double> margins(grid.size());
  std::vector<long long> idx(n);
  for (std::size_t node = 0; node < grid.size(); ++node) {
    std::size_t rest = node;
    for (int a = n - 1; a >= 0; --a) {
      idx[a] = static_cast<long long>(rest % N);
      rest /= N;
    }
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      long long k = 0;
      for (int j = 0; j < n; ++j) k += A(i, j) * idx[j];
      long long c = mod(k, N);
      if (2 * c > N) c -= N;
      const double P = M.periods()[i];
      m = std::min(m, P / 2 - static_cast<double>(std::llabs(c)) * P / static_cast<double>(N));
    }
    margins[node] = m;
  }
  return margins;
}

}  // namespace

double TimeProfile::mu(double s) const {
  return kind == TimeProfileKind::Rational ? s / (1.0 - s) : std::tan(kPi * s / 2);
}

double TimeProfile::mu_inverse(double u) const {
  return kind == TimeProfileKind::Rational ? u / (1.0 + u) : 2.0 / kPi * std::atan(u);
}

double TimeProfile::mu_inverse_derivative(double u) const {
  return kind == TimeProfileKind::Rational ? 1.0 / ((1.0 + u) * (1.0 + u))
                                           : 2.0 / kPi / (1.0 + u * u);
}

double TimeProfile::rescale(double s, double t) const {
  if (t == 1.0) return s;
  if (kind == TimeProfileKind::Rational) return t * s / (1.0 + (t - 1.0) * s);
  return 2.0 / kPi * std::atan(t * std::tan(kPi * s / 2));
}

double TimeProfile::rescale_ratio(double s, double t) const {
  if (t == 1.0) return 1.0;
  if (kind == TimeProfileKind::Rational) return t / (1.0 + (t - 1.0) * s);
  if (s < 1e-6) return t;
  return rescale(s, t) / s;
}

double TimeProfile::rescale_ratio_derivative(double s, double t) const {
  if (t == 1.0) return 0.0;
  if (kind == TimeProfileKind::Rational) {
    const double den = 1.0 + (t - 1.0) * s;
    return -t * (t - 1.0) / (den * den);
  }
  if (s < 1e-4) return (t - t * t * t) * kPi * kPi / 6.0 * s;
  const double a = kPi * s / 2;
  const double ds = t / (std::cos(a) * std::cos(a) + t * t * std::sin(a) * std::sin(a));
  return (ds * s - rescale(s, t)) / (s * s);
}

ManifoldPoint t_map(const ModelGeometry& M, const SmoothSelfMap& f, const TimeProfile& mu,
                    double t, const ManifoldPoint& x) {
  const ManifoldPoint y = map_eval(M, f, x);
  if (t == 1.0 || cut_margin(M, x, y) <= 0) return y;
  const Eigen::VectorXd v = log_map(M, x, y);
  const double len = tangent_norm(M, v);
  if (len == 0.0) return x;
  const Eigen::VectorXd u = v / len;
  const double D = directional_cut_distance(M, x, u);
  return exp_map(M, x, mu.rescale(len / D, t) * D * u);
}

SmoothSelfMap t_map_family(const ModelGeometry& M, const SmoothSelfMap& f, const TimeProfile& mu,
                           double t) {
  GenericChartMap g;
  g.name = "t_map(" + std::to_string(t) + "," + describe_map(f) + ")";
  g.eval = [M, f, mu, t](const Eigen::VectorXd& a) {
    return ambient(M, t_map(M, f, mu, t, from_ambient(M, a)));
  };
  if (M.is_flat()) {
    g.jacobian = [M, f, mu, t](const Eigen::VectorXd& a) -> Eigen::MatrixXd {
      const ManifoldPoint x = make_point(M, a);
      const ManifoldPoint y = map_eval(M, f, x);
      const Eigen::MatrixXd df = map_differential(M, f, x);
      if (t == 1.0 || cut_margin(M, x, y) <= 0) return df;
      const Eigen::VectorXd delta = log_map(M, x, y);
      const int n = static_cast<int>(delta.size());
      // s = max_i |delta_i| / (P_i / 2) and tf = x + delta * ratio(s).
      int k = 0;
      double s = 0.0;
      for (int i = 0; i < n; ++i) {
        const double si = std::abs(delta(i)) / (M.periods()[i] / 2);
        if (si > s) {
          s = si;
          k = i;
        }
      }
      Eigen::VectorXd grad = Eigen::VectorXd::Zero(n);
      if (s > 0) grad(k) = (delta(k) > 0 ? 1.0 : -1.0) / (M.periods()[k] / 2);
      const Eigen::MatrixXd Dg = mu.rescale_ratio(s, t) * Eigen::MatrixXd::Identity(n, n) +
                                 mu.rescale_ratio_derivative(s, t) * delta * grad.transpose();
      return Eigen::MatrixXd::Identity(n, n) + Dg * (df - Eigen::MatrixXd::Identity(n, n));
    };
  }
  return make_map(g);
}

std::string to_string(CutClass c) {
  switch (c) {
    case CutClass::Empty: return "empty";
    case CutClass::Finite: return "finite";
    case CutClass::CurveLike: return "curve-like";
  }
  return "?";
}

CutSetEstimate cut_set_estimate(const ModelGeometry& M, const SmoothSelfMap& f,
                                const QuadratureGrid& grid) {
  check_compatible(M, f);
  CutSetEstimate est;
  const double lip = operator_norm_sup(M, f, grid);
  est.tolerance = grid.spacing * (1.0 + lip);
  const auto exact = lattice_margins(M, f, grid);
  est.samples.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CutSample& s = est.samples[i];
    s.x = grid.points[i];
    s.margin = exact ? (*exact)[i] : cut_margin(M, s.x, map_eval(M, f, s.x));
    s.in_C_f = s.margin <= est.tolerance;
  }
  std::vector<char> seen(grid.size(), 0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!est.samples[i].in_C_f || seen[i]) continue;
    CutCluster c;
    c.deepest = i;
    std::deque<std::size_t> queue{i};
    seen[i] = 1;
    while (!queue.empty()) {
      const std::size_t k = queue.front();
      queue.pop_front();
      c.nodes.push_back(k);
      c.measure += grid.weights[k];
      if (est.samples[k].margin < est.samples[c.deepest].margin) c.deepest = k;
      for (std::size_t j : grid.neighbors(k))
        if (est.samples[j].in_C_f && !seen[j]) {
          seen[j] = 1;
          queue.push_back(j);
        }
    }
    est.measure += c.measure;
    est.clusters.push_back(std::move(c));
  }
  if (est.clusters.empty()) {
    est.classification = CutClass::Empty;
  } else {
    bool small = true;
    for (const auto& c : est.clusters)
      if (c.measure > 4 * est.tolerance * est.tolerance) small = false;
    est.classification = small ? CutClass::Finite : CutClass::CurveLike;
    est.count = static_cast<int>(est.clusters.size());
  }
  return est;
}

CutSetSummary classify_cut_set(const ModelGeometry& M, const SmoothSelfMap& f, int resolution) {
  CutSetSummary s;
  s.coarse = cut_set_estimate(M, f, build_grid(M, resolution));
  s.fine = cut_set_estimate(M, f, build_grid(M, 2 * resolution));
  if (s.coarse.clusters.empty() && s.fine.clusters.empty()) return s;
  if (s.coarse.measure > 0)
    s.scaling_ratio = (s.fine.measure / s.fine.tolerance) / (s.coarse.measure / s.coarse.tolerance);
  if (s.coarse.classification == CutClass::Finite && s.fine.classification == CutClass::Finite &&
      s.coarse.count == s.fine.count) {
    s.classification = CutClass::Finite;
    s.count = s.fine.count;
  } else if (s.scaling_ratio >= 0.5 && s.scaling_ratio <= 2.0) {
    s.classification = CutClass::CurveLike;
  } else {
    s.classification = s.fine.classification;
    s.count = s.fine.count;
  }
  return s;
}

std::vector<ManifoldPoint> sphere_cut_points(const ModelGeometry& M, const SmoothSelfMap& f,
                                             int resolution) {
  if (M.kind() != GeometryKind::Sphere2) throw UnsupportedManifold("sphere cut points need S^2");
  GenericChartMap antipodal;
  antipodal.name = "antipode∘" + describe_map(f);
  antipodal.eval = [M, f](const Eigen::VectorXd& a) {
    return Eigen::VectorXd(-map_eval(M, f, make_point(M, a)).coords);
  };
  return solve_fixed_points_numeric(M, make_map(antipodal), resolution);
}

int sign_refinement_sphere(const ModelGeometry& M, const SmoothSelfMap& f, int resolution) {
  const CutSetSummary summary = classify_cut_set(M, f, resolution);
  if (summary.classification == CutClass::CurveLike)
    throw NonFiniteCutSet("cut locus of the map is not a finite set");
  int total = 0;
  for (const auto& x : sphere_cut_points(M, f, resolution)) {
    const double det = map_differential(M, f, x).determinant();
    if (std::abs(det) < 1e-9) throw DegenerateRecord("map is not transverse to the cut locus");
    total += det > 0 ? 1 : -1;
  }
  return total;
}

nlohmann::json BoundReport::to_json() const {
  nlohmann::json j;
  j["L"] = L;
  j["chi"] = chi;
  j["cut_class"] = to_string(cut_class);
  j["cut_count"] = cut_count ? nlohmann::json(*cut_count) : nlohmann::json("infinite");
  j["inequality_holds"] = inequality_holds;
  j["sgn_sum"] = sgn_sum ? nlohmann::json(*sgn_sum) : nlohmann::json(nullptr);
  return j;
}

BoundReport bound_check(const ModelGeometry& M, const SmoothSelfMap& f, int resolution) {
  BoundReport r;
  const auto L = cohomological_lefschetz(M, f);
  if (!L) throw UnsupportedManifold("no Lefschetz oracle for this map");
  r.L = *L;
  r.chi = M.euler_characteristic();
  const CutSetSummary s = classify_cut_set(M, f, resolution);
  r.cut_class = s.classification;
  switch (s.classification) {
    case CutClass::Empty:
      r.cut_count = 0;
      r.inequality_holds = r.L == r.chi;
      break;
    case CutClass::Finite:
      r.cut_count = s.count;
      r.inequality_holds = std::abs(r.L - r.chi) <= s.count;
      break;
    case CutClass::CurveLike:
      r.inequality_holds = true;
      break;
  }
  if (M.kind() == GeometryKind::Sphere2 && s.classification != CutClass::CurveLike)
    r.sgn_sum = sign_refinement_sphere(M, f, resolution);
  return r;
}

double degree_current_estimate(const ModelGeometry& M, const SmoothSelfMap& f, int resolution,
                               const std::vector<double>& t_small, double delta) {
  const QuadratureGrid grid = build_grid(M, resolution);
  std::vector<double> mask(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    mask[i] = cut_fraction(M, grid.points[i], map_eval(M, f, grid.points[i])) > delta ? 1.0 : 0.0;
  std::vector<double> values;
  for (double t : t_small) {
    const SmoothSelfMap tf = t_map_family(M, f, TimeProfile{}, t);
    std::vector<double> dens(grid.size(), 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (mask[i] > 0) dens[i] = map_differential(M, tf, grid.points[i]).determinant() - 1.0;
    values.push_back(weighted_pairwise_sum(grid.weights, dens) / *M.volume());
  }
  return extrapolate_to_zero(t_small, values);
}

double singular_current_quadrature(const ModelGeometry& M, const SmoothSelfMap& f,
                                   const LefschetzOptions& options,
                                   const std::vector<double>& t_small, double delta) {
  const QuadratureGrid grid = build_grid(M, options.resolution);
  const RadialProfile p{options.profile, options.epsilon_fraction * M.injectivity_radius()};
  const SmoothSelfMap id = make_map(Identity{});
  std::vector<double> values;
  for (double t : t_small) {
    const SmoothSelfMap tf = t_map_family(M, f, TimeProfile{options.time_profile}, t);
    const auto dens = evaluate_density(
        grid,
        [&](const ManifoldPoint& x) {
          if (cut_fraction(M, x, map_eval(M, f, x)) <= delta) return 0.0;
          return lefschetz_integrand(M, tf, p, x) - lefschetz_integrand(M, id, p, x);
        },
        options.workers);
    values.push_back(weighted_pairwise_sum(grid.weights, dens));
  }
  return extrapolate_to_zero(t_small, values);
}

int singular_current_winding(const ModelGeometry& M, const SmoothSelfMap& f, int resolution,
                             double radius) {
  int total = 0;
  for (const auto& x0 : sphere_cut_points(M, f, resolution)) {
    const Eigen::MatrixXd F = tangent_frame(M, x0);
    auto field = [&](const Eigen::Vector2d& xi) -> Eigen::Vector2d {
      const ManifoldPoint x = exp_map(M, x0, F * xi);
      // Trivialize by transporting the frame at x0 radially out to x.
      const GeodesicData g = geodesic_between(M, x, x0);
      const Eigen::MatrixXd E = transport_matrix_ambient(M, g) * F;
      return E.transpose() * log_map(M, x, map_eval(M, f, x));
    };
    total += winding_index(field, Eigen::Vector2d::Zero(), radius);
  }
  return -total;
}

}  // namespace lefschetz
