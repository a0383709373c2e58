#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "lefschetz/geometry.hpp"
#include "lefschetz/maps.hpp"
#include "lefschetz/quadrature.hpp"

namespace lefschetz {

struct TimeProfile {
  TimeProfileKind kind = TimeProfileKind::Rational;

  double mu(double s) const;
  double mu_inverse(double u) const;
  double mu_inverse_derivative(double u) const;
  // mu^{-1}(t mu(s)); exactly s at t = 1.
  double rescale(double s, double t) const;
  // rescale(s, t) / s and its s-derivative, finite at s = 0.
  double rescale_ratio(double s, double t) const;
  double rescale_ratio_derivative(double s, double t) const;
};

ManifoldPoint t_map(const ModelGeometry& M, const SmoothSelfMap& f, const TimeProfile& mu,
                    double t, const ManifoldPoint& x);
// x -> t_map(x) as a self-map (analytic differential on flat geometries).
SmoothSelfMap t_map_family(const ModelGeometry& M, const SmoothSelfMap& f, const TimeProfile& mu,
                           double t);

struct CutSample {
  ManifoldPoint x;
  double margin = 0.0;
  bool in_C_f = false;
};

enum class CutClass { Empty, Finite, CurveLike };
std::string to_string(CutClass c);

struct CutCluster {
  std::vector<std::size_t> nodes;
  double measure = 0.0;
  std::size_t deepest = 0;  // node of smallest margin
};

struct CutSetEstimate {
  std::vector<CutSample> samples;
  std::vector<CutCluster> clusters;
  double tolerance = 0.0;
  double measure = 0.0;
  CutClass classification = CutClass::Empty;
  int count = 0;  // clusters when finite
};

CutSetEstimate cut_set_estimate(const ModelGeometry& M, const SmoothSelfMap& f,
                                const QuadratureGrid& grid);

struct CutSetSummary {
  CutClass classification = CutClass::Empty;
  int count = 0;
  double scaling_ratio = 0.0;  // (measure/h) fine over coarse
  CutSetEstimate coarse;
  CutSetEstimate fine;
};

// Two refinements (resolution and 2 * resolution).
CutSetSummary classify_cut_set(const ModelGeometry& M, const SmoothSelfMap& f, int resolution);

// Polished points of C(f) on the sphere (fixed points of the antipode of f).
std::vector<ManifoldPoint> sphere_cut_points(const ModelGeometry& M, const SmoothSelfMap& f,
                                             int resolution = 128);
int sign_refinement_sphere(const ModelGeometry& M, const SmoothSelfMap& f, int resolution = 128);

struct BoundReport {
  int L = 0;
  int chi = 0;
  CutClass cut_class = CutClass::Empty;
  std::optional<int> cut_count;  // absent when infinite
  bool inequality_holds = false;
  std::optional<int> sgn_sum;

  nlohmann::json to_json() const;
};

BoundReport bound_check(const ModelGeometry& M, const SmoothSelfMap& f, int resolution = 128);

// Polynomial (up to quadratic) extrapolation to t = 0 of
// (int_{B} (tf)^* dvol - vol(B)) / vol(M),
// B = {x : d(x, f(x)) > delta * cut distance}.
double degree_current_estimate(const ModelGeometry& M, const SmoothSelfMap& f, int resolution,
                               const std::vector<double>& t_small, double delta = 0.5);
// Same extrapolation of int_B [(Id, tf)^* MQ - Euler density].
double singular_current_quadrature(const ModelGeometry& M, const SmoothSelfMap& f,
                                   const LefschetzOptions& options,
                                   const std::vector<double>& t_small, double delta = 0.5);
// -sum of direction-field indices of x -> log_x f(x) around the points of C(f).
int singular_current_winding(const ModelGeometry& M, const SmoothSelfMap& f,
                             int resolution = 128, double radius = 0.05);

}  // namespace lefschetz
