#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "lefschetz/geometry.hpp"
#include "lefschetz/maps.hpp"

namespace lefschetz {

struct FixedPointRecord {
  ManifoldPoint point;
  Eigen::MatrixXd differential;
  int sign = 0;  // sgn det(Id - df); 0 when degenerate
  bool nondegenerate = false;
};

enum class SubmanifoldKind { WholeManifold, GreatCircle };

struct FixedSubmanifold {
  SubmanifoldKind kind = SubmanifoldKind::WholeManifold;
  Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();  // great circle plane normal
  int codimension = 0;
  int euler_characteristic = 0;
  double normal_det = 1.0;  // det(Id - df_nu); 1 by convention in codimension 0
};

struct FixedSet {
  std::vector<FixedPointRecord> points;
  std::vector<FixedSubmanifold> submanifolds;
  bool empty() const { return points.empty() && submanifolds.empty(); }
};

FixedPointRecord make_fixed_record(const ModelGeometry& M, const SmoothSelfMap& f,
                                   const ManifoldPoint& p);

// Closed form for built-in families, grid search plus Newton for generic maps.
FixedSet find_fixed_points(const ModelGeometry& M, const SmoothSelfMap& f);
double fixed_set_distance(const ModelGeometry& M, const FixedSet& fixed, const ManifoldPoint& x);

int fixed_point_lefschetz_sum(const std::vector<FixedPointRecord>& records);

struct SubmanifoldComponent {
  int euler_characteristic = 0;
  double normal_det = 1.0;
};
int fixed_submanifold_sum(const std::vector<SubmanifoldComponent>& components);
// Points and submanifolds together.
int fixed_set_lefschetz(const FixedSet& fixed);

std::optional<int> cohomological_lefschetz(const ModelGeometry& M, const SmoothSelfMap& f);

// Signed count of solutions of f(x) = target (circle and sphere).
int preimage_degree(const ModelGeometry& M, const SmoothSelfMap& f, const ManifoldPoint& target,
                    int resolution = 96);

// Roots of g(x) = x found by scanning a grid and polishing with Newton steps.
std::vector<ManifoldPoint> solve_fixed_points_numeric(const ModelGeometry& M,
                                                      const SmoothSelfMap& g, int resolution = 96);

using PlanarField = std::function<Eigen::Vector2d(const Eigen::Vector2d&)>;
int winding_index(const PlanarField& field, const Eigen::Vector2d& center, double radius,
                  int samples = 256);

}  // namespace lefschetz
