#include "lefschetz/integrand.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "lefschetz/errors.hpp"
#include "lefschetz/mqthom.hpp"

namespace lefschetz {

namespace {

constexpr double kPi = std::numbers::pi;
// e^{-rho^2} underflows to zero past this point.
constexpr double kRhoCutoff = 27.0;

double jacobi_c(double kappa, double t) {
  if (kappa > 0) return std::cos(t);
  if (kappa < 0) return std::cosh(t);
  return 1.0;
}

double jacobi_s(double kappa, double t) {
  if (kappa > 0) return std::sin(t);
  if (kappa < 0) return std::sinh(t);
  return t;
}

// t / S(t), finite at t = 0.
double jacobi_ratio(double kappa, double t) {
  if (kappa == 0.0) return 1.0;
  if (std::abs(t) < 1e-4) return 1.0 + (kappa > 0 ? 1.0 : -1.0) * t * t / 6.0;
  return t / jacobi_s(kappa, t);
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// Coefficient of det(N_I) contributed by Pf(Omega_I / 2) for constant curvature.
double curvature_weight(const MultiIndex& I, double kappa) {
  const int k = I.size();
  if (k == 0) return 1.0;
  if (kappa == 0.0) return 0.0;
  const double c = ((k / 2) % 2 == 0 ? 1.0 : -1.0) / (std::pow(2.0, k) * factorial(k / 2));
  return c * std::pow(2.0, -0.5 * k) * pfaffian_sum_constcurv(I, kappa);
}

struct Scaled {
  bool inside = false;
  double gauss = 0.0;  // e^{-rho^2}
  Eigen::VectorXd row_scale;
};

Scaled scaled_profile(const RadialProfile& p, double d, int n) {
  Scaled s;
  const ProfileValue v = profile_eval(p, d / std::sqrt(2.0));
  if (!v.inside || v.rho > kRhoCutoff) return s;
  s.inside = true;
  s.gauss = std::exp(-v.rho * v.rho);
  s.row_scale = Eigen::VectorXd::Constant(n, std::sqrt(2.0) * v.rho_over_r);
  s.row_scale(0) = std::sqrt(2.0) * v.drho;
  return s;
}

double sign_power(int n) { return n % 2 == 0 ? 1.0 : -1.0; }

}  // namespace

std::string to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::Secant: return "sec";
    case ProfileKind::Tangent: return "tan";
    case ProfileKind::RationalOdd: return "rational";
  }
  return "?";
}

ProfileKind parse_profile(const std::string& text) {
  if (text == "sec" || text == "secant") return ProfileKind::Secant;
  if (text == "tan" || text == "tangent") return ProfileKind::Tangent;
  if (text == "rational" || text == "rational_odd") return ProfileKind::RationalOdd;
  throw ParseError("unknown profile '" + text + "'");
}

ProfileValue profile_eval(const RadialProfile& p, double r) {
  ProfileValue v;
  const double eps = p.epsilon;
  if (!(r < eps) || r < 0) return v;
  const double a = kPi / (2.0 * eps);
  const double z = a * r;
  switch (p.kind) {
    case ProfileKind::Secant: {
      const double c = std::cos(z);
      if (c <= 0) return v;
      const double sh = std::sin(z / 2);
      v.rho = 2.0 * sh * sh / c;
      v.drho = a * std::sin(z) / (c * c);
      v.rho_over_r = r == 0.0 ? 0.0 : v.rho / r;
      break;
    }
    case ProfileKind::Tangent: {
      const double c = std::cos(z);
      if (c <= 0) return v;
      v.rho = std::tan(z);
      v.drho = a / (c * c);
      v.rho_over_r = r == 0.0 ? a : v.rho / r;
      break;
    }
    case ProfileKind::RationalOdd: {
      const double s = r / eps;
      const double den = 1.0 - s * s;
      v.rho = r / den;
      v.drho = (1.0 + s * s) / (den * den);
      v.rho_over_r = 1.0 / den;
      break;
    }
  }
  v.inside = std::isfinite(v.rho) && std::isfinite(v.drho);
  return v;
}

VHDecomposition jacobi_decompose(double kappa, double d, const Eigen::VectorXd& q,
                                 const Eigen::VectorXd& w) {
  if (kappa > 0 && d >= kPi) throw ConjugatePoint("geodesic reaches a conjugate point");
  const int n = static_cast<int>(q.size());
  const double h = d / 2;
  VHDecomposition out;
  out.midpoint_value.resize(n);
  out.midpoint_velocity.resize(n);
  out.midpoint_value(0) = (q(0) + w(0)) / 2;
  out.midpoint_velocity(0) = (w(0) - q(0)) / d;
  for (int j = 1; j < n; ++j) {
    out.midpoint_value(j) = (q(j) + w(j)) / (2 * jacobi_c(kappa, h));
    out.midpoint_velocity(j) = (w(j) - q(j)) / (2 * jacobi_s(kappa, h));
  }
  // J1 vanishes at the midpoint, J2 has zero velocity there.
  auto j1 = [&](double t) {
    Eigen::VectorXd v(n);
    v(0) = out.midpoint_velocity(0) * (t - h);
    for (int j = 1; j < n; ++j) v(j) = out.midpoint_velocity(j) * jacobi_s(kappa, t - h);
    return v;
  };
  auto j2 = [&](double t) {
    Eigen::VectorXd v(n);
    v(0) = out.midpoint_value(0);
    for (int j = 1; j < n; ++j) v(j) = out.midpoint_value(j) * jacobi_c(kappa, t - h);
    return v;
  };
  out.X1 = j1(0.0);
  out.Z1 = j1(d);
  out.Xt1 = j2(0.0);
  out.Zt1 = j2(d);
  return out;
}

VHDecomposition jacobi_decompose(const ModelGeometry& M, const GeodesicData& g,
                                 const TangentVector& q, const TangentVector& fq) {
  const Eigen::MatrixXd G = ambient_metric(M);
  const Eigen::MatrixXd E = g.distance > 0 ? adapted_frame(M, g.x, g.tangent_at_x)
                                           : tangent_frame(M, g.x);
  const TangentVector back = parallel_transport(M, g, fq);
  if ((ambient(M, q.base) - ambient(M, g.x)).norm() > 1e-10)
    throw BaseMismatch("q is not based at the geodesic start");
  const Eigen::VectorXd qc = E.transpose() * G * q.components;
  const Eigen::VectorXd wc = E.transpose() * G * back.components;
  return jacobi_decompose(M.curvature(), g.distance, qc, wc);
}

ABMatrices ab_matrices(double kappa, double d, const Eigen::MatrixXd& W) {
  if (kappa > 0 && d >= kPi) throw ConjugatePoint("geodesic reaches a conjugate point");
  const int n = static_cast<int>(W.rows());
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd da = Eigen::VectorXd::Ones(n), db = Eigen::VectorXd::Ones(n);
  for (int j = 1; j < n; ++j) {
    da(j) = 1.0 / jacobi_c(kappa, d / 2);
    db(j) = jacobi_ratio(kappa, d / 2);
  }
  ABMatrices ab;
  ab.A = da.asDiagonal() * (0.5 * (W + I));
  ab.B = db.asDiagonal() * (0.5 * (W - I));
  return ab;
}

double integrand_from_frame(double kappa, double d, const Eigen::MatrixXd& W,
                            const RadialProfile& p) {
  const int n = static_cast<int>(W.rows());
  const Scaled s = scaled_profile(p, d, n);
  if (!s.inside) return 0.0;
  const ABMatrices ab = ab_matrices(kappa, d, W);
  const Eigen::MatrixXd Bs = s.row_scale.asDiagonal() * ab.B;
  double total = 0.0;
  for (const auto& I : even_multi_indices(n)) {
    const double weight = curvature_weight(I, kappa);
    if (weight == 0.0) continue;
    Eigen::MatrixXd N(n, n);
    for (int j = 0; j < n; ++j) N.row(j) = I.contains(j + 1) ? ab.A.row(j) : Bs.row(j);
    total += weight * N.determinant();
  }
  return sign_power(n) * std::pow(kPi, -0.5 * n) * s.gauss * total;
}

double integrand_permutation_assembly(double kappa, double d, const Eigen::MatrixXd& W,
                                      const RadialProfile& p) {
  const int n = static_cast<int>(W.rows());
  const Scaled s = scaled_profile(p, d, n);
  if (!s.inside) return 0.0;
  const ABMatrices ab = ab_matrices(kappa, d, W);
  const Eigen::MatrixXd Bs = s.row_scale.asDiagonal() * ab.B;
  auto det_block = [](const Eigen::MatrixXd& X, const std::vector<int>& rows,
                      const std::vector<int>& cols) {
    if (rows.empty()) return 1.0;
    Eigen::MatrixXd S(rows.size(), cols.size());
    for (std::size_t a = 0; a < rows.size(); ++a)
      for (std::size_t b = 0; b < cols.size(); ++b) S(a, b) = X(rows[a], cols[b]);
    return S.determinant();
  };
  double total = 0.0;
  for (const auto& I : even_multi_indices(n)) {
    const double weight = curvature_weight(I, kappa);
    if (weight == 0.0) continue;
    std::vector<int> rows_i, rows_c;
    for (int j = 0; j < n; ++j) (I.contains(j + 1) ? rows_i : rows_c).push_back(j);
    const int k = I.size();
    std::vector<int> mu(n);
    std::iota(mu.begin(), mu.end(), 0);
    double sum = 0.0;
    do {
      int inv = 0;
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
          if (mu[a] > mu[b]) ++inv;
      const std::vector<int> cols_i(mu.begin(), mu.begin() + k);
      const std::vector<int> cols_c(mu.begin() + k, mu.end());
      sum += (inv % 2 == 0 ? 1.0 : -1.0) * det_block(ab.A, rows_i, cols_i) *
             det_block(Bs, rows_c, cols_c);
    } while (std::next_permutation(mu.begin(), mu.end()));
    total += shuffle_sign(I) * weight * sum / (factorial(k) * factorial(n - k));
  }
  return sign_power(n) * std::pow(kPi, -0.5 * n) * s.gauss * total;
}

double integrand_surface_closed_form(double kappa, double d, const Eigen::MatrixXd& W,
                                     const RadialProfile& p) {
  const ProfileValue v = profile_eval(p, d / std::sqrt(2.0));
  if (!v.inside || v.rho > kRhoCutoff) return 0.0;
  const Eigen::Matrix2d I = Eigen::Matrix2d::Identity();
  const double plus = (0.5 * (W + I)).determinant();
  const double minus = (0.5 * (W - I)).determinant();
  const double bracket = kappa * plus / jacobi_c(kappa, d / 2) +
                         v.drho * v.rho_over_r * 4.0 * jacobi_ratio(kappa, d / 2) * minus;
  return std::exp(-v.rho * v.rho) * bracket / (2 * kPi);
}

FrameData transported_differential(const ModelGeometry& M, const ManifoldPoint& x,
                                   const ManifoldPoint& fx, const Eigen::MatrixXd& df) {
  FrameData out;
  const Eigen::MatrixXd G = ambient_metric(M);
  const Eigen::MatrixXd Fx = tangent_frame(M, x);
  const Eigen::MatrixXd Fy = tangent_frame(M, fx);
  const GeodesicData g = geodesic_between(M, x, fx);
  out.distance = g.distance;
  if (g.distance < 1e-12) {
    // Transport is the identity to this order; align the canonical frames.
    out.W = Fx.transpose() * G * Fy * df;
    return out;
  }
  const Eigen::MatrixXd E = adapted_frame(M, x, g.tangent_at_x);
  const Eigen::MatrixXd P = transport_matrix_ambient(M, g);
  out.W = E.transpose() * G * P * Fy * df * Fx.transpose() * G * E;
  return out;
}

double lefschetz_integrand_flat(const ModelGeometry& M, const SmoothSelfMap& f,
                                const RadialProfile& p, const ManifoldPoint& x) {
  if (!M.is_flat()) throw UnsupportedManifold("flat integrand needs a flat geometry");
  const ManifoldPoint y = map_eval(M, f, x);
  if (cut_margin(M, x, y) <= 1e-12) return 0.0;
  const int n = M.dimension();
  const double d = distance(M, x, y);
  const ProfileValue v = profile_eval(p, d / std::sqrt(2.0));
  if (!v.inside || v.rho > kRhoCutoff) return 0.0;
  const Eigen::MatrixXd df = map_differential(M, f, x);
  const double det = (Eigen::MatrixXd::Identity(n, n) - df).determinant();
  return std::pow(2 * kPi, -0.5 * n) * std::exp(-v.rho * v.rho) * v.drho *
         std::pow(v.rho_over_r, n - 1) * det;
}

double lefschetz_integrand_constcurv(const ModelGeometry& M, const SmoothSelfMap& f,
                                     const RadialProfile& p, const ManifoldPoint& x) {
  const double kappa = M.curvature();
  if (kappa == 0.0) throw UnsupportedManifold("curved integrand needs kappa = +1 or -1");
  const ManifoldPoint y = map_eval(M, f, x);
  if (cut_margin(M, x, y) <= 1e-12) return 0.0;
  const double d = distance(M, x, y);
  if (!(d < std::sqrt(2.0) * p.epsilon)) return 0.0;
  const FrameData fd = transported_differential(M, x, y, map_differential(M, f, x));
  return integrand_from_frame(kappa, fd.distance, fd.W, p);
}

double lefschetz_integrand(const ModelGeometry& M, const SmoothSelfMap& f,
                           const RadialProfile& p, const ManifoldPoint& x) {
  return M.is_flat() ? lefschetz_integrand_flat(M, f, p, x)
                     : lefschetz_integrand_constcurv(M, f, p, x);
}

}  // namespace lefschetz
