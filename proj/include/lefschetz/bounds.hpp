#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <random>

#include "lefschetz/geometry.hpp"
#include "lefschetz/integrand.hpp"
#include "lefschetz/maps.hpp"
#include "lefschetz/mqthom.hpp"

namespace lefschetz {

// Coefficients alpha_I over multi_indices(n, k) in lexicographic order.
struct AlternatingForm {
  int k = 1;
  int n = 1;
  Eigen::VectorXd coeffs;

  static AlternatingForm zero(int k, int n);
  static AlternatingForm random(int k, int n, std::mt19937_64& rng);
  double& operator[](const MultiIndex& I);
  double operator[](const MultiIndex& I) const;
};

double norm_l2(const AlternatingForm& a);
// alpha(v_1, ..., v_k) for the columns of V (n x k).
double evaluate_form(const AlternatingForm& a, const Eigen::MatrixXd& V);
// Sup of |alpha(v)| over unit decomposable v, by alternating maximization
// from `restarts` random orthonormal starts. The result is a certified lower bound.
double norm_linf(const AlternatingForm& a, int restarts = 10000, std::uint64_t seed = 1);
// Closed form when k is 0, 1, 2, n - 2, n - 1 or n.
std::optional<double> norm_linf_exact(const AlternatingForm& a);
// Hodge dual in the same coefficient convention.
AlternatingForm hodge_star(const AlternatingForm& a);

struct LemmaConstants {
  double lower = 0.0;         // binom(n, k)^{-1/2}
  double upper = 1.0;         // sharp constant: comass never exceeds mass
  double bracket_sup = 0.0;   // ascent maximum of the per-index ratio
  double printed_upper = 0.0; // sqrt(k!/binom(n, k) * bracket_sup)
  double chain_upper = 0.0;   // sqrt(k! * bracket_sup), valid but not sharp
  double achieved = 0.0;      // largest |alpha|_inf / |alpha|_2 seen on random forms
};

LemmaConstants lemma_constants(int k, int n, int restarts = 10000, int samples = 1000,
                               std::uint64_t seed = 1);

// sup_r e^{-rho^2} rho' (rho / r)^{n-1} over the tube.
double flat_profile_constant(const RadialProfile& p, int n);
// C / (2 pi)^{n/2} vol(M) (sup ||df|| + 1)^n.
double flat_bound(const ModelGeometry& M, const SmoothSelfMap& f, const RadialProfile& p,
                  int grid_resolution = 64);
// 1 + sum_k C(k,n) binom(n,k) beta_k |df|^k with beta_k = binom(n,k) and the
// parallel-form value of the harmonic sup norm.
double hodge_bound_flat_torus(const ModelGeometry& M, const SmoothSelfMap& f);

double binomial(int n, int k);

}  // namespace lefschetz
