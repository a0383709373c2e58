#include "lefschetz/oracles.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "lefschetz/errors.hpp"
#include "lefschetz/quadrature.hpp"

namespace lefschetz {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

FixedSubmanifold whole_manifold(const ModelGeometry& M) {
  FixedSubmanifold s;
  s.kind = SubmanifoldKind::WholeManifold;
  s.euler_characteristic = M.euler_characteristic();
  return s;
}

FixedSubmanifold great_circle(const Eigen::Vector3d& normal, double normal_det) {
  FixedSubmanifold s;
  s.kind = SubmanifoldKind::GreatCircle;
  s.normal = normal.normalized();
  s.codimension = 1;
  s.euler_characteristic = 0;
  s.normal_det = normal_det;
  return s;
}

long long round_det(const Eigen::MatrixXd& A) { return std::llround(A.determinant()); }

// Integer adjugate of a small integer matrix.
Eigen::MatrixXi adjugate(const Eigen::MatrixXi& A) {
  const int n = static_cast<int>(A.rows());
  Eigen::MatrixXi adj(n, n);
  if (n == 1) {
    adj(0, 0) = 1;
    return adj;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Eigen::MatrixXd minor(n - 1, n - 1);
      for (int a = 0, ra = 0; a < n; ++a) {
        if (a == j) continue;
        for (int b = 0, cb = 0; b < n; ++b) {
          if (b == i) continue;
          minor(ra, cb++) = A(a, b);
        }
        ++ra;
      }
      adj(i, j) = static_cast<int>(((i + j) % 2 == 0 ? 1 : -1) * round_det(minor));
    }
  return adj;
}

long long mod(long long a, long long m) { return ((a % m) + m) % m; }

std::vector<ManifoldPoint> torus_fixed_points(const ModelGeometry& M, const TorusLinear& t) {
  const int n = static_cast<int>(t.matrix.rows());
  const Eigen::MatrixXi A = t.matrix - Eigen::MatrixXi::Identity(n, n);
  const long long det = round_det(A.cast<double>());
  if (det == 0) throw DegenerateFixedSet("det(M - I) = 0: fixed set is not isolated");
  const long long m = std::llabs(det);
  const Eigen::MatrixXi adj = adjugate(A);
  // Fixed angles are A^{-1} k (mod 1) = adj k / det for integer k.
  std::set<std::vector<long long>> seen;
  std::vector<int> k(n, 0);
  while (true) {
    std::vector<long long> u(n);
    for (int i = 0; i < n; ++i) {
      long long s = 0;
      for (int j = 0; j < n; ++j) s += static_cast<long long>(adj(i, j)) * k[j];
      u[i] = mod(det > 0 ? s : -s, m);
    }
    seen.insert(u);
    int a = 0;
    while (a < n && ++k[a] == m) k[a++] = 0;
    if (a == n) break;
  }
  std::vector<ManifoldPoint> out;
  for (const auto& u : seen) {
    Eigen::VectorXd c(n);
    for (int i = 0; i < n; ++i) c(i) = M.periods()[i] * static_cast<double>(u[i]) / m;
    out.push_back(make_point(M, c));
  }
  return out;
}

struct RootProblem {
  std::function<Eigen::VectorXd(const ManifoldPoint&)> residual;
  std::function<Eigen::MatrixXd(const ManifoldPoint&)> jacobian;
};

std::vector<ManifoldPoint> newton_roots(const ModelGeometry& M, const RootProblem& prob,
                                        int resolution, double scan_threshold) {
  const QuadratureGrid grid = build_grid(M, resolution);
  std::vector<double> size(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    try {
      size[i] = prob.residual(grid.points[i]).norm();
    } catch (const CutLocusViolation&) {
      size[i] = std::numeric_limits<double>::infinity();
    }
  }
  std::vector<ManifoldPoint> roots;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(size[i] < scan_threshold)) continue;
    bool local_min = true;
    for (std::size_t j : grid.neighbors(i))
      if (size[j] < size[i] || (size[j] == size[i] && j < i)) local_min = false;
    if (!local_min) continue;
    ManifoldPoint x = grid.points[i];
    bool converged = false;
    try {
      for (int it = 0; it < 40; ++it) {
        const Eigen::VectorXd r = prob.residual(x);
        if (r.norm() < 1e-13) {
          converged = true;
          break;
        }
        const Eigen::MatrixXd J = prob.jacobian(x);
        const Eigen::VectorXd step = J.fullPivLu().solve(-r);
        if (!step.allFinite()) break;
        x = exp_map(M, x, tangent_frame(M, x) * step);
        if (step.norm() < 1e-15) break;
      }
      converged = converged || prob.residual(x).norm() < 1e-10;
    } catch (const CutLocusViolation&) {
      converged = false;
    }
    if (!converged) continue;
    bool duplicate = false;
    for (const auto& r : roots)
      if (distance(M, r, x) < 1e-7) duplicate = true;
    if (!duplicate) roots.push_back(x);
  }
  return roots;
}

}  // namespace

FixedPointRecord make_fixed_record(const ModelGeometry& M, const SmoothSelfMap& f,
                                   const ManifoldPoint& p) {
  FixedPointRecord r;
  r.point = p;
  r.differential = map_differential(M, f, p);
  const int n = static_cast<int>(r.differential.rows());
  const double det = (Eigen::MatrixXd::Identity(n, n) - r.differential).determinant();
  r.nondegenerate = std::abs(det) > 1e-9;
  r.sign = r.nondegenerate ? (det > 0 ? 1 : -1) : 0;
  return r;
}

std::vector<ManifoldPoint> solve_fixed_points_numeric(const ModelGeometry& M,
                                                      const SmoothSelfMap& g, int resolution) {
  const Eigen::MatrixXd G = ambient_metric(M);
  RootProblem prob;
  prob.residual = [&](const ManifoldPoint& x) -> Eigen::VectorXd {
    return tangent_frame(M, x).transpose() * G * log_map(M, x, map_eval(M, g, x));
  };
  prob.jacobian = [&](const ManifoldPoint& x) -> Eigen::MatrixXd {
    const ManifoldPoint gx = map_eval(M, g, x);
    const Eigen::MatrixXd D = map_differential(M, g, x);
    const Eigen::MatrixXd align = tangent_frame(M, x).transpose() * G * tangent_frame(M, gx);
    return align * D - Eigen::MatrixXd::Identity(D.rows(), D.cols());
  };
  return newton_roots(M, prob, resolution, 0.5);
}

int preimage_degree(const ModelGeometry& M, const SmoothSelfMap& f, const ManifoldPoint& target,
                    int resolution) {
  const Eigen::MatrixXd G = ambient_metric(M);
  const Eigen::MatrixXd Ft = tangent_frame(M, target);
  RootProblem prob;
  prob.residual = [&](const ManifoldPoint& x) -> Eigen::VectorXd {
    return Ft.transpose() * G * log_map(M, target, map_eval(M, f, x));
  };
  prob.jacobian = [&](const ManifoldPoint& x) -> Eigen::MatrixXd {
    const ManifoldPoint fx = map_eval(M, f, x);
    return Ft.transpose() * G * tangent_frame(M, fx) * map_differential(M, f, x);
  };
  int degree = 0;
  for (const auto& x : newton_roots(M, prob, resolution, 0.5)) {
    const double det = map_differential(M, f, x).determinant();
    if (std::abs(det) < 1e-9) throw DegenerateRecord("target is not a regular value");
    degree += det > 0 ? 1 : -1;
  }
  return degree;
}

FixedSet find_fixed_points(const ModelGeometry& M, const SmoothSelfMap& f) {
  check_compatible(M, f);
  FixedSet out;
  auto add = [&](const ManifoldPoint& p) { out.points.push_back(make_fixed_record(M, f, p)); };
  std::visit(
      overloaded{
          [&](const CirclePower& c) {
            if (c.n == 1) {
              out.submanifolds.push_back(whole_manifold(M));
              return;
            }
            const int m = std::abs(c.n - 1);
            for (int k = 0; k < m; ++k)
              add(make_point(M, Eigen::VectorXd::Constant(1, M.periods()[0] * k / m)));
          },
          [&](const TorusLinear& t) {
            for (const auto& p : torus_fixed_points(M, t)) add(p);
          },
          [&](const SphereRotation& r) {
            if (std::abs(std::sin(r.angle)) < 1e-15 && std::cos(r.angle) > 0) {
              out.submanifolds.push_back(whole_manifold(M));
              return;
            }
            add(make_point(M, r.axis));
            add(make_point(M, -r.axis));
          },
          [&](const SphereReflection& r) { out.submanifolds.push_back(great_circle(r.normal, 2.0)); },
          [&](const SphereSuspension& s) {
            add(make_point(M, Eigen::Vector3d::UnitZ()));
            add(make_point(M, -Eigen::Vector3d::UnitZ()));
            if (s.n == 1) {
              out.submanifolds.push_back(great_circle(Eigen::Vector3d::UnitZ(), 1.0 - 2.0));
              return;
            }
            const int m = std::abs(s.n - 1);
            for (int k = 0; k < m; ++k) {
              const double lam = 2 * kPi * k / m;
              add(make_point(M, Eigen::Vector3d(std::cos(lam), std::sin(lam), 0.0)));
            }
          },
          [&](const Identity&) { out.submanifolds.push_back(whole_manifold(M)); },
          [&](const GenericChartMap&) {
            for (const auto& p : solve_fixed_points_numeric(M, f)) add(p);
          },
      },
      f.family);
  return out;
}

double fixed_set_distance(const ModelGeometry& M, const FixedSet& fixed, const ManifoldPoint& x) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& r : fixed.points) best = std::min(best, distance(M, r.point, x));
  for (const auto& s : fixed.submanifolds) {
    if (s.kind == SubmanifoldKind::WholeManifold) return 0.0;
    const double c = std::clamp(s.normal.dot(Eigen::Vector3d(x.coords)), -1.0, 1.0);
    best = std::min(best, std::abs(std::asin(c)));
  }
  return best;
}

int fixed_point_lefschetz_sum(const std::vector<FixedPointRecord>& records) {
  int total = 0;
  for (const auto& r : records) {
    if (!r.nondegenerate) throw DegenerateRecord("det(Id - df) vanishes at a fixed point");
    total += r.sign;
  }
  return total;
}

int fixed_submanifold_sum(const std::vector<SubmanifoldComponent>& components) {
  int total = 0;
  for (const auto& c : components) {
    if (std::abs(c.normal_det) < 1e-12)
      throw CleanIntersectionViolation("det(Id - df_nu) vanishes on a fixed component");
    total += (c.normal_det > 0 ? 1 : -1) * c.euler_characteristic;
  }
  return total;
}

int fixed_set_lefschetz(const FixedSet& fixed) {
  std::vector<SubmanifoldComponent> comps;
  for (const auto& s : fixed.submanifolds) comps.push_back({s.euler_characteristic, s.normal_det});
  return fixed_point_lefschetz_sum(fixed.points) + fixed_submanifold_sum(comps);
}

std::optional<int> cohomological_lefschetz(const ModelGeometry& M, const SmoothSelfMap& f) {
  check_compatible(M, f);
  const bool sphere = M.kind() == GeometryKind::Sphere2;
  return std::visit(
      overloaded{
          [&](const CirclePower& c) -> std::optional<int> { return 1 - c.n; },
          [&](const TorusLinear& t) -> std::optional<int> {
            // Alternating sum of traces on H^k = sums of principal k-minors.
            const int n = static_cast<int>(t.matrix.rows());
            const Eigen::MatrixXd A = t.matrix.cast<double>();
            long long total = 1;
            for (int k = 1; k <= n; ++k) {
              long long trace = 0;
              for (int mask = 0; mask < (1 << n); ++mask) {
                if (__builtin_popcount(mask) != k) continue;
                std::vector<int> idx;
                for (int i = 0; i < n; ++i)
                  if (mask & (1 << i)) idx.push_back(i);
                Eigen::MatrixXd S(k, k);
                for (int a = 0; a < k; ++a)
                  for (int b = 0; b < k; ++b) S(a, b) = A(idx[a], idx[b]);
                trace += round_det(S);
              }
              total += (k % 2 == 0 ? 1 : -1) * trace;
            }
            return static_cast<int>(total);
          },
          [&](const SphereRotation&) -> std::optional<int> { return 2; },
          [&](const SphereReflection&) -> std::optional<int> { return 0; },
          [&](const SphereSuspension& s) -> std::optional<int> { return 1 + s.n; },
          [&](const Identity&) -> std::optional<int> { return M.euler_characteristic(); },
          [&](const GenericChartMap&) -> std::optional<int> {
            if (sphere) {
              const ManifoldPoint target =
                  make_point(M, Eigen::Vector3d(0.3141, -0.2718, 0.9121));
              return 1 + preimage_degree(M, f, target);
            }
            if (M.is_flat() && M.dimension() == 1) {
              const ManifoldPoint target = make_point(M, Eigen::VectorXd::Constant(1, 1.2345));
              return 1 - preimage_degree(M, f, target);
            }
            return std::nullopt;
          },
      },
      f.family);
}

int winding_index(const PlanarField& field, const Eigen::Vector2d& center, double radius,
                  int samples) {
  std::vector<Eigen::Vector2d> values;
  values.reserve(static_cast<std::size_t>(samples) + 1);
  double scale = 0.0;
  for (int k = 0; k <= samples; ++k) {
    const double phi = 2 * kPi * k / samples;
    values.push_back(field(center + radius * Eigen::Vector2d(std::cos(phi), std::sin(phi))));
    if (!values.back().allFinite()) throw ZeroOnCircle("field is not finite on the circle");
    scale = std::max(scale, values.back().norm());
  }
  double total = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!(values[k].norm() > 1e-12 * scale)) throw ZeroOnCircle("field vanishes on the circle");
    if (k > 0) {
      const double a = std::atan2(values[k](1), values[k](0));
      const double b = std::atan2(values[k - 1](1), values[k - 1](0));
      total += std::remainder(a - b, 2 * kPi);
    }
  }
  return static_cast<int>(std::lround(total / (2 * kPi)));
}

}  // namespace lefschetz
