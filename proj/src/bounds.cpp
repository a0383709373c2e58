#include "lefschetz/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lefschetz/errors.hpp"
#include "lefschetz/quadrature.hpp"

namespace lefschetz {

namespace {

std::size_t index_of(const MultiIndex& I) {
  const auto all = multi_indices(I.rank(), I.size());
  const auto it = std::find(all.begin(), all.end(), I);
  if (it == all.end()) throw ParseError("multi-index does not match the form");
  return static_cast<std::size_t>(it - all.begin());
}

Eigen::MatrixXd random_orthonormal(int n, int k, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd X(n, k);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) X(i, j) = g(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(X);
  return qr.householderQ() * Eigen::MatrixXd::Identity(n, k);
}

double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

// Sup over a of sum_{sigma} prod_q a_q[sigma(q)]^2 / prod_q |a_q|^2 for the
// index set {0..k-1}. For fixed other rows the ratio is a diagonal Rayleigh
// quotient in a_q, so each coordinate step jumps to a basis vector.
double bracket_ascent(int k, int n, int restarts, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  auto ratio = [&](const Eigen::MatrixXd& a) {
    std::vector<int> perm(k);
    for (int i = 0; i < k; ++i) perm[i] = i;
    double num = 0.0;
    do {
      double p = 1.0;
      for (int q = 0; q < k; ++q) p *= a(q, perm[q]) * a(q, perm[q]);
      num += p;
    } while (std::next_permutation(perm.begin(), perm.end()));
    double den = 1.0;
    for (int q = 0; q < k; ++q) den *= a.row(q).squaredNorm();
    return num / den;
  };
  double best = 0.0;
  for (int r = 0; r < restarts; ++r) {
    Eigen::MatrixXd a(k, n);
    for (int q = 0; q < k; ++q)
      for (int j = 0; j < n; ++j) a(q, j) = g(rng);
    for (int sweep = 0; sweep < 2 * k; ++sweep) {
      for (int q = 0; q < k; ++q) {
        // Diagonal weights D_j = d(num)/d(a_q[j]^2); coordinates outside the set get 0.
        Eigen::VectorXd D = Eigen::VectorXd::Zero(n);
        for (int j = 0; j < k; ++j) {
          Eigen::MatrixXd b = a;
          b.row(q).setZero();
          b(q, j) = 1.0;
          std::vector<int> perm(k);
          for (int i = 0; i < k; ++i) perm[i] = i;
          double s = 0.0;
          do {
            if (perm[q] != j) continue;
            double p = 1.0;
            for (int t = 0; t < k; ++t)
              if (t != q) p *= b(t, perm[t]) * b(t, perm[t]);
            s += p;
          } while (std::next_permutation(perm.begin(), perm.end()));
          D(j) = s;
        }
        Eigen::Index jmax = 0;
        D.maxCoeff(&jmax);
        a.row(q).setZero();
        a(q, jmax) = 1.0;
      }
    }
    best = std::max(best, ratio(a));
  }
  return best;
}

}  // namespace

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

AlternatingForm AlternatingForm::zero(int k, int n) {
  AlternatingForm a;
  a.k = k;
  a.n = n;
  a.coeffs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(binomial(n, k)));
  return a;
}

AlternatingForm AlternatingForm::random(int k, int n, std::mt19937_64& rng) {
  AlternatingForm a = zero(k, n);
  std::normal_distribution<double> g(0.0, 1.0);
  for (Eigen::Index i = 0; i < a.coeffs.size(); ++i) a.coeffs(i) = g(rng);
  return a;
}

double& AlternatingForm::operator[](const MultiIndex& I) {
  return coeffs(static_cast<Eigen::Index>(index_of(I)));
}

double AlternatingForm::operator[](const MultiIndex& I) const {
  return coeffs(static_cast<Eigen::Index>(index_of(I)));
}

double norm_l2(const AlternatingForm& a) { return a.coeffs.norm(); }

double evaluate_form(const AlternatingForm& a, const Eigen::MatrixXd& V) {
  const auto idx = multi_indices(a.n, a.k);
  double s = 0.0;
  for (std::size_t m = 0; m < idx.size(); ++m) {
    if (a.coeffs(m) == 0.0) continue;
    Eigen::MatrixXd sub(a.k, a.k);
    for (int r = 0; r < a.k; ++r) sub.row(r) = V.row(idx[m].members()[r] - 1);
    s += a.coeffs(m) * sub.determinant();
  }
  return s;
}

double norm_linf(const AlternatingForm& a, int restarts, std::uint64_t seed) {
  if (a.k == 0) return std::abs(a.coeffs(0));
  std::mt19937_64 rng(seed);
  double best = 0.0;
  for (int r = 0; r < restarts; ++r) {
    Eigen::MatrixXd V = random_orthonormal(a.n, a.k, rng);
    double value = evaluate_form(a, V);
    for (int sweep = 0; sweep < 200; ++sweep) {
      for (int j = 0; j < a.k; ++j) {
        // alpha is linear in column j; its gradient is orthogonal to the other columns.
        Eigen::VectorXd grad(a.n);
        Eigen::MatrixXd W = V;
        for (int i = 0; i < a.n; ++i) {
          W.col(j) = Eigen::VectorXd::Unit(a.n, i);
          grad(i) = evaluate_form(a, W);
        }
        for (int o = 0; o < a.k; ++o)
          if (o != j) grad -= grad.dot(V.col(o)) * V.col(o);
        const double len = grad.norm();
        if (len == 0.0) break;
        V.col(j) = grad / len;
      }
      const double next = evaluate_form(a, V);
      const bool done = next - value < 1e-15 * std::max(1.0, std::abs(next));
      value = next;
      if (done) break;
    }
    best = std::max(best, std::abs(value));
  }
  return best;
}

AlternatingForm hodge_star(const AlternatingForm& a) {
  AlternatingForm out = AlternatingForm::zero(a.n - a.k, a.n);
  const auto idx = multi_indices(a.n, a.k);
  for (std::size_t m = 0; m < idx.size(); ++m) out[idx[m].complement()] = shuffle_sign(idx[m]) * a.coeffs(m);
  return out;
}

std::optional<double> norm_linf_exact(const AlternatingForm& a) {
  if (a.k == 0 || a.k == 1 || a.k == a.n - 1 || a.k == a.n) return norm_l2(a);
  if (a.k == 2) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(a.n, a.n);
    const auto idx = multi_indices(a.n, 2);
    for (std::size_t m = 0; m < idx.size(); ++m) {
      const int i = idx[m].members()[0] - 1, j = idx[m].members()[1] - 1;
      A(i, j) = a.coeffs(m);
      A(j, i) = -a.coeffs(m);
    }
    return Eigen::JacobiSVD<Eigen::MatrixXd>(A).singularValues()(0);
  }
  if (a.k == a.n - 2) return norm_linf_exact(hodge_star(a));
  return std::nullopt;
}

LemmaConstants lemma_constants(int k, int n, int restarts, int samples, std::uint64_t seed) {
  if (k < 1 || k > n) throw ParseError("lemma constants need 1 <= k <= n");
  LemmaConstants c;
  const double b = binomial(n, k);
  c.lower = 1.0 / std::sqrt(b);
  std::mt19937_64 rng(seed);
  c.bracket_sup = bracket_ascent(k, n, restarts, rng);
  c.printed_upper = std::sqrt(factorial(k) / b * c.bracket_sup);
  c.chain_upper = std::sqrt(factorial(k) * c.bracket_sup);
  c.upper = 1.0;
  for (int s = 0; s < samples; ++s) {
    const AlternatingForm a = AlternatingForm::random(k, n, rng);
    const auto exact = norm_linf_exact(a);
    const double inf = exact ? *exact : norm_linf(a, 200, seed + s);
    c.achieved = std::max(c.achieved, inf / norm_l2(a));
  }
  return c;
}

double flat_profile_constant(const RadialProfile& p, int n) {
  auto g = [&](double r) {
    const ProfileValue v = profile_eval(p, r);
    if (!v.inside) return 0.0;
    return std::exp(-v.rho * v.rho) * v.drho * std::pow(v.rho_over_r, n - 1);
  };
  const int N = 20000;
  const double h = p.epsilon / N;
  int best = 0;
  double best_value = -1.0;
  for (int i = 0; i < N; ++i) {
    const double value = g((i + 0.5) * h);
    if (value > best_value) {
      best_value = value;
      best = i;
    }
  }
  // Golden-section refinement on the bracketing cells.
  double lo = std::max(0.0, (best - 0.5) * h), hi = std::min(p.epsilon, (best + 1.5) * h);
  const double phi = (std::sqrt(5.0) - 1) / 2;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = g(x1), f2 = g(x2);
  for (int it = 0; it < 100; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = g(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = g(x1);
    }
  }
  return std::max({best_value, f1, f2, g(0.0)});
}

double flat_bound(const ModelGeometry& M, const SmoothSelfMap& f, const RadialProfile& p,
                  int grid_resolution) {
  if (!M.is_flat()) throw UnsupportedManifold("flat bound needs a flat manifold");
  const int n = M.dimension();
  const double lip = operator_norm_sup(M, f, build_grid(M, grid_resolution));
  return flat_profile_constant(p, n) / std::pow(2 * std::numbers::pi, n / 2.0) * *M.volume() *
         std::pow(lip + 1.0, n);
}

double hodge_bound_flat_torus(const ModelGeometry& M, const SmoothSelfMap& f) {
  if (!M.is_flat()) throw UnsupportedManifold("Hodge bound is specialized to flat tori");
  const int n = M.dimension();
  const double lip = operator_norm_sup(M, f, build_grid(M, 16));
  // D = vol^{1/2} * sup |theta^I / sqrt(vol)|_2 = 1 for parallel forms.
  const double D = 1.0;
  double bound = 1.0;
  for (int k = 1; k <= n; ++k) {
    const double C = 1.0;
    bound += D * C * binomial(n, k) * binomial(n, k) * std::pow(lip, k);
  }
  return bound;
}

}  // namespace lefschetz
