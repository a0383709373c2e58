#include "lefschetz/quadrature.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <thread>

#include "lefschetz/cutflow.hpp"
#include "lefschetz/errors.hpp"
#include "lefschetz/oracles.hpp"

namespace lefschetz {

namespace {

constexpr double kPi = std::numbers::pi;

double pairwise(const double* w, const double* v, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += w[i] * v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise(w, v, half) + pairwise(w + half, v + half, n - half);
}

std::string describe_point(const ManifoldPoint& p) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (int i = 0; i < p.coords.size(); ++i) os << (i ? ", " : "") << p.coords(i);
  os << ")";
  return os.str();
}

}  // namespace

void gauss_legendre(int m, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(m, 0.0);
  weights.assign(m, 0.0);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (m == 1) p0 = 1.0;
      dp = m * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    nodes[i] = -z;
    nodes[m - 1 - i] = z;
    weights[i] = weights[m - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

int default_workers() {
  if (const char* env = std::getenv("LEFSCHETZ_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

QuadratureGrid build_grid(const ModelGeometry& M, int resolution) {
  if (resolution < 8) throw ParseError("grid resolution must be at least 8");
  QuadratureGrid g;
  g.kind = M.kind();
  g.resolution = resolution;
  switch (M.kind()) {
    case GeometryKind::HyperbolicPatch2:
      throw UnsupportedManifold("no global quadrature on the hyperbolic patch");
    case GeometryKind::Circle:
    case GeometryKind::FlatTorus: {
      const int n = M.dimension();
      const auto& P = M.periods();
      g.shape.assign(n, resolution);
      std::size_t total = 1;
      double cell = 1.0;
      for (int a = 0; a < n; ++a) {
        total *= resolution;
        cell *= P[a] / resolution;
        g.spacing = std::max(g.spacing, P[a] / resolution);
      }
      g.points.reserve(total);
      g.weights.assign(total, cell);
      std::vector<int> idx(n, 0);
      for (std::size_t k = 0; k < total; ++k) {
        Eigen::VectorXd c(n);
        for (int a = 0; a < n; ++a) c(a) = idx[a] * P[a] / resolution;
        g.points.push_back(make_point(M, c));
        for (int a = n - 1; a >= 0; --a) {
          if (++idx[a] < resolution) break;
          idx[a] = 0;
        }
      }
      break;
    }
    case GeometryKind::Sphere2: {
      std::vector<double> z, w;
      gauss_legendre(resolution, z, w);
      const int lons = 2 * resolution;
      g.shape = {resolution, lons};
      g.points.reserve(static_cast<std::size_t>(resolution) * lons);
      for (int i = 0; i < resolution; ++i) {
        const double s = std::sqrt(1.0 - z[i] * z[i]);
        for (int j = 0; j < lons; ++j) {
          const double lam = 2 * kPi * j / lons;
          g.points.push_back({Eigen::Vector3d(s * std::cos(lam), s * std::sin(lam), z[i])});
          g.weights.push_back(w[i] * 2 * kPi / lons);
        }
      }
      g.spacing = kPi / resolution;
      break;
    }
  }
  g.total_weight = weighted_pairwise_sum(g.weights, std::vector<double>(g.weights.size(), 1.0));
  return g;
}

std::vector<std::size_t> QuadratureGrid::neighbors(std::size_t node) const {
  std::vector<std::size_t> out;
  const int dims = static_cast<int>(shape.size());
  std::vector<int> idx(dims);
  std::size_t rest = node;
  for (int a = dims - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(rest % shape[a]);
    rest /= shape[a];
  }
  auto flatten = [&](const std::vector<int>& v) {
    std::size_t k = 0;
    for (int a = 0; a < dims; ++a) k = k * shape[a] + v[a];
    return k;
  };
  const bool sphere = kind == GeometryKind::Sphere2;
  for (int a = 0; a < dims; ++a) {
    for (int step : {-1, 1}) {
      std::vector<int> v = idx;
      v[a] += step;
      if (sphere && a == 0) {
        if (v[0] < 0 || v[0] >= shape[0]) {
          // Across the pole: same ring, opposite longitude.
          v[0] = idx[0];
          v[1] = (idx[1] + shape[1] / 2) % shape[1];
        }
      } else {
        v[a] = (v[a] % shape[a] + shape[a]) % shape[a];
      }
      const std::size_t k = flatten(v);
      if (k != node) out.push_back(k);
    }
  }
  return out;
}

std::vector<double> evaluate_density(const QuadratureGrid& grid, const Density& density,
                                     int workers) {
  const std::size_t n = grid.size();
  std::vector<double> values(n, 0.0);
  const int w = std::max(1, std::min<int>(workers > 0 ? workers : default_workers(),
                                          static_cast<int>(std::max<std::size_t>(1, n / 256))));
  std::vector<std::exception_ptr> errors(w);
  auto work = [&](int id) {
    const std::size_t lo = n * id / w, hi = n * (id + 1) / w;
    try {
      for (std::size_t i = lo; i < hi; ++i) values[i] = density(grid.points[i]);
    } catch (...) {
      errors[id] = std::current_exception();
    }
  };
  if (w == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int id = 0; id < w; ++id) pool.emplace_back(work, id);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(values[i])) throw NonFiniteDensity(i, describe_point(grid.points[i]));
  return values;
}

double weighted_pairwise_sum(const std::vector<double>& weights,
                             const std::vector<double>& values) {
  if (weights.size() != values.size()) throw BaseMismatch("weight/value size mismatch");
  return weights.empty() ? 0.0 : pairwise(weights.data(), values.data(), weights.size());
}

double integrate_density(const QuadratureGrid& grid, const Density& density, int workers) {
  return weighted_pairwise_sum(grid.weights, evaluate_density(grid, density, workers));
}

nlohmann::json LefschetzReport::to_json() const {
  nlohmann::json j;
  j["manifold"] = manifold;
  j["map"] = map;
  j["integral"] = integral;
  j["oracle"] = oracle ? nlohmann::json(*oracle) : nlohmann::json(nullptr);
  j["residual"] = residual ? nlohmann::json(*residual) : nlohmann::json(nullptr);
  j["resolution"] = resolution;
  j["profile"] = to_string(profile);
  j["epsilon"] = epsilon;
  j["t"] = t;
  j["wall_time"] = wall_time;
  j["mass_fraction"] = mass_fraction ? nlohmann::json(*mass_fraction) : nlohmann::json(nullptr);
  j["notes"] = notes;
  return j;
}

LefschetzReport LefschetzReport::from_json(const nlohmann::json& j) {
  LefschetzReport r;
  try {
    r.manifold = j.at("manifold").get<std::string>();
    r.map = j.at("map").get<std::string>();
    r.integral = j.at("integral").get<double>();
    if (!j.at("oracle").is_null()) r.oracle = j.at("oracle").get<int>();
    if (!j.at("residual").is_null()) r.residual = j.at("residual").get<double>();
    r.resolution = j.at("resolution").get<int>();
    r.profile = parse_profile(j.at("profile").get<std::string>());
    r.epsilon = j.at("epsilon").get<double>();
    r.t = j.at("t").get<double>();
    r.wall_time = j.at("wall_time").get<double>();
    if (j.contains("mass_fraction") && !j.at("mass_fraction").is_null())
      r.mass_fraction = j.at("mass_fraction").get<double>();
    r.notes = j.value("notes", std::vector<std::string>{});
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
  return r;
}

SmoothSelfMap deformed_map(const ModelGeometry& M, const SmoothSelfMap& f, double t,
                           TimeProfileKind mu) {
  if (t == 1.0) return f;
  return t_map_family(M, f, TimeProfile{mu}, t);
}

namespace {

struct Evaluation {
  LefschetzReport report;
  std::vector<double> values;
  QuadratureGrid grid;
};

Evaluation evaluate(const ModelGeometry& M, const SmoothSelfMap& f,
                    const LefschetzOptions& o) {
  check_compatible(M, f);
  const auto start = std::chrono::steady_clock::now();
  Evaluation ev;
  ev.grid = build_grid(M, o.resolution);
  const RadialProfile p{o.profile, o.epsilon_fraction * M.injectivity_radius()};
  const SmoothSelfMap ft = deformed_map(M, f, o.t, o.time_profile);
  ev.values = evaluate_density(
      ev.grid, [&](const ManifoldPoint& x) { return lefschetz_integrand(M, ft, p, x); },
      o.workers);
  LefschetzReport& r = ev.report;
  r.manifold = M.to_json().dump();
  r.map = describe_map(f);
  r.integral = weighted_pairwise_sum(ev.grid.weights, ev.values);
  r.oracle = cohomological_lefschetz(M, f);
  if (r.oracle) r.residual = std::abs(r.integral - *r.oracle);
  r.resolution = o.resolution;
  r.profile = o.profile;
  r.epsilon = p.epsilon;
  r.t = o.t;
  if (M.is_flat() && M.dimension() > 1)
    r.notes.push_back("flat density carries the radial factor (rho/r)^(n-1)");
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return ev;
}

double mass_fraction(const ModelGeometry& M, const SmoothSelfMap& f, const Evaluation& ev,
                     double delta) {
  const FixedSet fixed = find_fixed_points(M, f);
  if (fixed.empty()) throw EmptyFixedSet("map has no fixed points");
  std::vector<double> near(ev.values.size()), all(ev.values.size());
  for (std::size_t i = 0; i < ev.values.size(); ++i) {
    all[i] = std::abs(ev.values[i]);
    near[i] = fixed_set_distance(M, fixed, ev.grid.points[i]) <= delta ? all[i] : 0.0;
  }
  const double total = weighted_pairwise_sum(ev.grid.weights, all);
  if (total == 0.0) return 1.0;
  return weighted_pairwise_sum(ev.grid.weights, near) / total;
}

}  // namespace

LefschetzReport compute_lefschetz(const ModelGeometry& M, const SmoothSelfMap& f,
                                  const LefschetzOptions& options) {
  return evaluate(M, f, options).report;
}

std::vector<LefschetzReport> sweep_t(const ModelGeometry& M, const SmoothSelfMap& f,
                                     const LefschetzOptions& options,
                                     const std::vector<double>& t_values) {
  std::vector<LefschetzReport> out;
  for (double t : t_values) {
    if (!(t > 0)) throw ParseError("sweep values of t must be positive");
    LefschetzOptions o = options;
    o.t = t;
    Evaluation ev = evaluate(M, f, o);
    ev.report.mass_fraction = mass_fraction(M, f, ev, 0.1 * M.injectivity_radius());
    out.push_back(ev.report);
  }
  return out;
}

double localization_mass(const ModelGeometry& M, const SmoothSelfMap& f,
                         const LefschetzOptions& options, double delta) {
  return mass_fraction(M, f, evaluate(M, f, options), delta);
}

}  // namespace lefschetz
