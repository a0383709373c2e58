#pragma once

#include <Eigen/Dense>
#include <string>

#include "lefschetz/geometry.hpp"
#include "lefschetz/maps.hpp"

namespace lefschetz {

enum class ProfileKind { Secant, Tangent, RationalOdd };

std::string to_string(ProfileKind kind);
ProfileKind parse_profile(const std::string& text);

struct ProfileValue {
  bool inside = false;
  double rho = 0.0;
  double drho = 0.0;
  double rho_over_r = 0.0;
};

struct RadialProfile {
  ProfileKind kind = ProfileKind::Secant;
  double epsilon = 1.0;
};

ProfileValue profile_eval(const RadialProfile& p, double r);

// Endpoint data of the Jacobi field with J(0) = q, J(d) = w, split as
// J = J1 + J2 with J1(d/2) = 0 and J2'(d/2) = 0. Components live in the
// geodesic frame (tangent first), w already transported back to x.
struct VHDecomposition {
  Eigen::VectorXd X1, Z1;    // vertical endpoints at x and f(x)
  Eigen::VectorXd Xt1, Zt1;  // horizontal endpoints
  Eigen::VectorXd midpoint_value;
  Eigen::VectorXd midpoint_velocity;
};

VHDecomposition jacobi_decompose(double kappa, double d, const Eigen::VectorXd& q,
                                 const Eigen::VectorXd& w);
VHDecomposition jacobi_decompose(const ModelGeometry& M, const GeodesicData& g,
                                 const TangentVector& q, const TangentVector& fq);

// A = half-sum (horizontal) and B = half-difference (vertical) matrices in the
// geodesic frame, radial direction first. Columns are the input directions.
// At d = 0 they reduce to (W + I)/2 and (W - I)/2.
struct ABMatrices {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  int radial_index = 0;
};

ABMatrices ab_matrices(double kappa, double d, const Eigen::MatrixXd& W);

// Pointwise density from the transported differential W = ||∘df in the
// geodesic frame at distance d. Valid for kappa in {-1, 0, 1}, any n.
double integrand_from_frame(double kappa, double d, const Eigen::MatrixXd& W,
                            const RadialProfile& p);
// Same quantity assembled with the explicit permutation sums over the rows.
double integrand_permutation_assembly(double kappa, double d, const Eigen::MatrixXd& W,
                                      const RadialProfile& p);
// Closed form for surfaces (kappa = +1 or -1).
double integrand_surface_closed_form(double kappa, double d, const Eigen::MatrixXd& W,
                                     const RadialProfile& p);

double lefschetz_integrand_flat(const ModelGeometry& M, const SmoothSelfMap& f,
                                const RadialProfile& p, const ManifoldPoint& x);
double lefschetz_integrand_constcurv(const ModelGeometry& M, const SmoothSelfMap& f,
                                     const RadialProfile& p, const ManifoldPoint& x);
// Dispatches on the curvature of M.
double lefschetz_integrand(const ModelGeometry& M, const SmoothSelfMap& f,
                           const RadialProfile& p, const ManifoldPoint& x);

// Geodesic-frame data used by the curved integrand: distance and W.
struct FrameData {
  double distance = 0.0;
  Eigen::MatrixXd W;
};
FrameData transported_differential(const ModelGeometry& M, const ManifoldPoint& x,
                                   const ManifoldPoint& fx, const Eigen::MatrixXd& df);

}  // namespace lefschetz
