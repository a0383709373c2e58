#pragma once

#include <functional>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "lefschetz/geometry.hpp"
#include "lefschetz/integrand.hpp"
#include "lefschetz/maps.hpp"

namespace lefschetz {

// Structured product grid. Nodes are stored row-major over `shape`:
// circle {N}, torus {N, N, ...}, sphere {rings, longitudes}.
struct QuadratureGrid {
  GeometryKind kind = GeometryKind::Sphere2;
  int resolution = 0;
  std::vector<int> shape;
  std::vector<ManifoldPoint> points;
  std::vector<double> weights;
  double total_weight = 0.0;
  double spacing = 0.0;  // largest geodesic node spacing

  std::size_t size() const { return points.size(); }
  std::vector<std::size_t> neighbors(std::size_t node) const;
};

QuadratureGrid build_grid(const ModelGeometry& M, int resolution);

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int m, std::vector<double>& nodes, std::vector<double>& weights);

// LEFSCHETZ_THREADS if set, hardware concurrency otherwise.
int default_workers();

using Density = std::function<double(const ManifoldPoint&)>;

// Density values at every node; throws NonFiniteDensity.
std::vector<double> evaluate_density(const QuadratureGrid& grid, const Density& density,
                                     int workers = 0);
// Balanced pairwise sum of weights[i] * values[i]; order independent of workers.
double weighted_pairwise_sum(const std::vector<double>& weights,
                             const std::vector<double>& values);
double integrate_density(const QuadratureGrid& grid, const Density& density, int workers = 0);

enum class TimeProfileKind { Rational, TangentHalf };

struct LefschetzOptions {
  ProfileKind profile = ProfileKind::Secant;
  double epsilon_fraction = 0.45;
  int resolution = 256;
  double t = 1.0;
  TimeProfileKind time_profile = TimeProfileKind::Rational;
  int workers = 0;
};

struct LefschetzReport {
  std::string manifold;
  std::string map;
  double integral = 0.0;
  std::optional<int> oracle;
  std::optional<double> residual;
  int resolution = 0;
  ProfileKind profile = ProfileKind::Secant;
  double epsilon = 0.0;
  double t = 1.0;
  double wall_time = 0.0;
  std::optional<double> mass_fraction;
  std::vector<std::string> notes;

  nlohmann::json to_json() const;
  static LefschetzReport from_json(const nlohmann::json& j);
  bool operator==(const LefschetzReport&) const = default;
};

// The map whose Lefschetz integral is taken at deformation parameter t.
SmoothSelfMap deformed_map(const ModelGeometry& M, const SmoothSelfMap& f, double t,
                           TimeProfileKind mu);

LefschetzReport compute_lefschetz(const ModelGeometry& M, const SmoothSelfMap& f,
                                  const LefschetzOptions& options);
// With mass_fraction filled in for delta = 0.1 * injectivity radius.
std::vector<LefschetzReport> sweep_t(const ModelGeometry& M, const SmoothSelfMap& f,
                                     const LefschetzOptions& options,
                                     const std::vector<double>& t_values);
double localization_mass(const ModelGeometry& M, const SmoothSelfMap& f,
                         const LefschetzOptions& options, double delta);

}  // namespace lefschetz
