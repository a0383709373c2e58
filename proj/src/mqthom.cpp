#include "lefschetz/mqthom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "lefschetz/errors.hpp"

namespace lefschetz {

MultiIndex::MultiIndex(int rank, std::vector<int> members) : rank_(rank), members_(std::move(members)) {
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_[i] < 1 || members_[i] > rank_) throw ParseError("multi-index member out of range");
    if (i > 0 && members_[i] <= members_[i - 1]) throw ParseError("multi-index must be increasing");
  }
}

bool MultiIndex::contains(int i) const {
  return std::binary_search(members_.begin(), members_.end(), i);
}

MultiIndex MultiIndex::complement() const {
  std::vector<int> rest;
  for (int i = 1; i <= rank_; ++i)
    if (!contains(i)) rest.push_back(i);
  return {rank_, rest};
}

std::vector<MultiIndex> multi_indices(int n, int k) {
  std::vector<MultiIndex> out;
  if (k < 0 || k > n) return out;
  std::vector<int> pick(k);
  std::iota(pick.begin(), pick.end(), 1);
  while (true) {
    out.emplace_back(n, pick);
    int i = k - 1;
    while (i >= 0 && pick[i] == n - k + i + 1) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

std::vector<MultiIndex> even_multi_indices(int n) {
  std::vector<MultiIndex> out;
  for (int k = 0; k <= n; k += 2) {
    auto level = multi_indices(n, k);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

int shuffle_sign(const MultiIndex& I) {
  const MultiIndex Ic = I.complement();
  int inversions = 0;
  for (int i : I.members())
    for (int j : Ic.members())
      if (i > j) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

namespace {

double pfaffian_rec(const Eigen::MatrixXd& A) {
  const int k = static_cast<int>(A.rows());
  if (k == 0) return 1.0;
  if (k == 2) return A(0, 1);
  double total = 0.0;
  for (int j = 1; j < k; ++j) {
    if (A(0, j) == 0.0) continue;
    std::vector<int> keep;
    for (int r = 1; r < k; ++r)
      if (r != j) keep.push_back(r);
    Eigen::MatrixXd sub(k - 2, k - 2);
    for (int a = 0; a < k - 2; ++a)
      for (int b = 0; b < k - 2; ++b) sub(a, b) = A(keep[a], keep[b]);
    total += ((j % 2 == 1) ? 1.0 : -1.0) * A(0, j) * pfaffian_rec(sub);
  }
  return total;
}

}  // namespace

double pfaffian(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols()) throw NotAntisymmetric("matrix is not square");
  if (A.rows() % 2 != 0) throw NotAntisymmetric("odd size has no Pfaffian");
  if (A.rows() == 0) return 1.0;
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  if ((A + A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw NotAntisymmetric("A + A^T is not zero");
  return pfaffian_rec(A);
}

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& A, const MultiIndex& I) {
  const int k = I.size();
  Eigen::MatrixXd S(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) S(a, b) = A(I.members()[a] - 1, I.members()[b] - 1);
  return S;
}

double MQCoefficients::coefficient(const MultiIndex& I) const {
  auto it = coefficients.find(I.members());
  return it == coefficients.end() ? 0.0 : it->second;
}

MQCoefficients mq_coefficients(int n, const Eigen::MatrixXd& omega, const Eigen::VectorXd& x) {
  MQCoefficients out;
  out.rank = n;
  out.x = x;
  out.omega = omega;
  const double base = std::pow(std::numbers::pi, -0.5 * n) * std::exp(-x.squaredNorm());
  for (const auto& I : even_multi_indices(n))
    out.coefficients[I.members()] = base * shuffle_sign(I) * pfaffian(0.5 * submatrix(omega, I));
  return out;
}

void gauss_hermite(int m, std::vector<double>& nodes, std::vector<double>& weights) {
  // Golub-Welsch on the Hermite Jacobi matrix.
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
  for (int i = 1; i < m; ++i) J(i, i - 1) = J(i - 1, i) = std::sqrt(i / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  nodes.resize(m);
  weights.resize(m);
  const double mu0 = std::sqrt(std::numbers::pi);
  for (int i = 0; i < m; ++i) {
    nodes[i] = es.eigenvalues()(i);
    const double v = es.eigenvectors()(0, i);
    weights[i] = mu0 * v * v;
  }
}

double fiber_integral(int n, const Eigen::MatrixXd& omega, int points_per_axis) {
  std::vector<double> nodes, weights;
  gauss_hermite(points_per_axis, nodes, weights);
  // Only I = {} has full vertical degree; its x-dependence is the factor e^{-|x|^2},
  // which the Gauss-Hermite weights already carry.
  const double c0 = mq_coefficients(n, omega, Eigen::VectorXd::Zero(n)).coefficient(MultiIndex(n, {}));
  std::vector<int> idx(n, 0);
  double total = 0.0;
  while (true) {
    double w = 1.0;
    for (int a = 0; a < n; ++a) w *= weights[idx[a]];
    total += w * c0;
    int a = 0;
    while (a < n && ++idx[a] == points_per_axis) idx[a++] = 0;
    if (a == n) break;
  }
  return total;
}

double pfaffian_sum_constcurv(const MultiIndex& I, double kappa) {
  const int k = I.size();
  if (k % 2 != 0) throw ParseError("pfaffian_sum_constcurv needs even |I|");
  if (k == 0) return 1.0;
  auto R = [kappa](int i, int j, int a, int b) {
    return -kappa * ((i == a && j == b ? 1.0 : 0.0) - (i == b && j == a ? 1.0 : 0.0));
  };
  std::vector<int> s(k), t(k);
  std::iota(s.begin(), s.end(), 0);
  auto parity = [](const std::vector<int>& p) {
    int inv = 0;
    for (std::size_t a = 0; a < p.size(); ++a)
      for (std::size_t b = a + 1; b < p.size(); ++b)
        if (p[a] > p[b]) ++inv;
    return inv % 2 == 0 ? 1.0 : -1.0;
  };
  const auto& m = I.members();
  double total = 0.0;
  do {
    t = std::vector<int>(k);
    std::iota(t.begin(), t.end(), 0);
    do {
      double prod = parity(s) * parity(t);
      for (int p = 0; p < k && prod != 0.0; p += 2)
        prod *= R(m[s[p]], m[s[p + 1]], m[t[p]], m[t[p + 1]]);
      total += prod;
    } while (std::next_permutation(t.begin(), t.end()));
  } while (std::next_permutation(s.begin(), s.end()));
  return total;
}

}  // namespace lefschetz
