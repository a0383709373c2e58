#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lefschetz/errors.hpp"
#include "lefschetz/mqthom.hpp"

using namespace lefschetz;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::MatrixXd random_skew(int k, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      A(i, j) = g(rng);
      A(j, i) = -A(i, j);
    }
  return A;
}

Eigen::MatrixXd random_orthogonal(int k, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd X(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) X(i, j) = g(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(X);
  return qr.householderQ() * Eigen::MatrixXd::Identity(k, k);
}

// Parity of the permutation listing I then I' by counting inversions.
int inversion_parity(const MultiIndex& I) {
  std::vector<int> perm = I.members();
  const auto c = I.complement().members();
  perm.insert(perm.end(), c.begin(), c.end());
  int inv = 0;
  for (std::size_t a = 0; a < perm.size(); ++a)
    for (std::size_t b = a + 1; b < perm.size(); ++b) inv += perm[a] > perm[b];
  return inv % 2 == 0 ? 1 : -1;
}

}  // namespace

TEST(MultiIndex, ValidatesMembers) {
  EXPECT_THROW(MultiIndex(3, {2, 1}), Error);
  EXPECT_THROW(MultiIndex(3, {1, 4}), Error);
  EXPECT_THROW(MultiIndex(3, {2, 2}), Error);
  const MultiIndex I(5, {1, 4});
  EXPECT_EQ(I.complement().members(), (std::vector<int>{2, 3, 5}));
  EXPECT_EQ(multi_indices(5, 2).size(), 10u);
  EXPECT_EQ(even_multi_indices(4).size(), 8u);
}

TEST(ShuffleSign, Examples) {
  EXPECT_EQ(shuffle_sign(MultiIndex(3, {1, 2})), 1);
  EXPECT_EQ(shuffle_sign(MultiIndex(3, {2, 3})), 1);
  EXPECT_EQ(shuffle_sign(MultiIndex(4, {1, 3})), -1);
}

TEST(ShuffleSign, MatchesInversionCountAndSwapRule) {
  for (int n = 1; n <= 6; ++n)
    for (int k = 0; k <= n; ++k)
      for (const auto& I : multi_indices(n, k)) {
        EXPECT_EQ(shuffle_sign(I), inversion_parity(I));
        const int expected = (I.size() * (n - I.size())) % 2 == 0 ? 1 : -1;
        EXPECT_EQ(shuffle_sign(I) * shuffle_sign(I.complement()), expected);
      }
}

TEST(Pfaffian, Examples) {
  Eigen::MatrixXd A(2, 2);
  A << 0, 1.7, -1.7, 0;
  EXPECT_DOUBLE_EQ(pfaffian(A), 1.7);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(4, 4);
  B(0, 1) = 2.0;
  B(1, 0) = -2.0;
  B(2, 3) = -3.0;
  B(3, 2) = 3.0;
  EXPECT_DOUBLE_EQ(pfaffian(B), -6.0);
  EXPECT_EQ(pfaffian(Eigen::MatrixXd(0, 0)), 1.0);
  EXPECT_THROW(pfaffian(Eigen::MatrixXd::Zero(3, 3)), NotAntisymmetric);
  Eigen::MatrixXd C = A;
  C(0, 1) = 1.0;
  EXPECT_THROW(pfaffian(C), NotAntisymmetric);
}

TEST(Pfaffian, SquareIsDeterminant) {
  std::mt19937_64 rng(11);
  for (int k : {2, 4, 6, 8})
    for (int s = 0; s < 20; ++s) {
      const Eigen::MatrixXd A = random_skew(k, rng);
      const double pf = pfaffian(A);
      EXPECT_NEAR(pf * pf, A.determinant(), 1e-9 * std::max(1.0, std::abs(A.determinant())));
    }
}

TEST(Pfaffian, OrthogonalCovariance) {
  std::mt19937_64 rng(12);
  for (int k : {4, 6})
    for (int s = 0; s < 20; ++s) {
      const Eigen::MatrixXd A = random_skew(k, rng);
      const Eigen::MatrixXd Q = random_orthogonal(k, rng);
      const Eigen::MatrixXd QAQ = Q.transpose() * A * Q;
      EXPECT_NEAR(pfaffian(QAQ), Q.determinant() * pfaffian(A), 1e-9 * std::max(1.0, std::abs(pfaffian(A))));
    }
}

TEST(MQCoefficients, Examples) {
  const auto c1 = mq_coefficients(1, Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Constant(1, 0.8));
  EXPECT_NEAR(c1.coefficient(MultiIndex(1, {})), std::exp(-0.64) / std::sqrt(kPi), 1e-15);

  const auto c2 = mq_coefficients(2, Eigen::MatrixXd::Zero(2, 2), Eigen::VectorXd::Zero(2));
  EXPECT_NEAR(c2.coefficient(MultiIndex(2, {})), 1.0 / kPi, 1e-15);
  EXPECT_EQ(c2.coefficient(MultiIndex(2, {1, 2})), 0.0);

  Eigen::MatrixXd omega(2, 2);
  omega << 0, 0.9, -0.9, 0;
  const auto c3 = mq_coefficients(2, omega, Eigen::VectorXd::Zero(2));
  EXPECT_NEAR(c3.coefficient(MultiIndex(2, {1, 2})), 0.9 / (2 * kPi), 1e-15);
}

TEST(MQCoefficients, StructuralInvariants) {
  std::mt19937_64 rng(13);
  for (int n = 1; n <= 5; ++n) {
    const Eigen::MatrixXd omega = random_skew(n, rng);
    Eigen::VectorXd x = Eigen::VectorXd::Random(n);
    const auto c = mq_coefficients(n, omega, x);
    for (const auto& [members, value] : c.coefficients) {
      EXPECT_EQ(members.size() % 2, 0u);
      const MultiIndex I(n, members);
      const double expected = std::pow(kPi, -0.5 * n) * std::exp(-x.squaredNorm()) * shuffle_sign(I) *
                              pfaffian(0.5 * submatrix(omega, I));
      EXPECT_NEAR(value, expected, 1e-14);
    }
    EXPECT_EQ(c.coefficient(MultiIndex(n, {1})), 0.0);
    const auto flat = mq_coefficients(n, Eigen::MatrixXd::Zero(n, n), x);
    for (const auto& [members, value] : flat.coefficients)
      if (!members.empty()) EXPECT_EQ(value, 0.0);
  }
}

TEST(FiberIntegral, IsOne) {
  EXPECT_NEAR(fiber_integral(1, Eigen::MatrixXd::Zero(1, 1)), 1.0, 1e-12);
  EXPECT_NEAR(fiber_integral(3, Eigen::MatrixXd::Zero(3, 3)), 1.0, 1e-12);
  std::mt19937_64 rng(14);
  for (int n = 1; n <= 4; ++n)
    for (int s = 0; s < 20; ++s) EXPECT_NEAR(fiber_integral(n, random_skew(n, rng)), 1.0, 1e-6);
}

TEST(ConstantCurvatureSum, Examples) {
  EXPECT_EQ(pfaffian_sum_constcurv(MultiIndex(3, {}), -1.0), 1.0);
  EXPECT_DOUBLE_EQ(pfaffian_sum_constcurv(MultiIndex(2, {1, 2}), -1.0), 4.0);
  EXPECT_DOUBLE_EQ(pfaffian_sum_constcurv(MultiIndex(2, {1, 2}), 1.0), -4.0);
}

TEST(ConstantCurvatureSum, MatchesBruteForce) {
  // R_ijkl = -kappa (d_ik d_jl - d_il d_jk), summed over pairs of permutations of I.
  for (double kappa : {-1.0, 1.0, 0.5})
    for (int m : {2, 4}) {
      std::vector<int> p(m);
      for (int i = 0; i < m; ++i) p[i] = i;
      auto R = [&](int i, int j, int k, int l) {
        return -kappa * ((i == k && j == l) - (i == l && j == k));
      };
      auto sign = [](const std::vector<int>& s) {
        int inv = 0;
        for (std::size_t a = 0; a < s.size(); ++a)
          for (std::size_t b = a + 1; b < s.size(); ++b) inv += s[a] > s[b];
        return inv % 2 ? -1 : 1;
      };
      double total = 0.0;
      std::vector<int> sigma = p;
      do {
        std::vector<int> tau = p;
        do {
          double prod = sign(sigma) * sign(tau);
          for (int r = 0; r < m; r += 2) prod *= R(sigma[r], sigma[r + 1], tau[r], tau[r + 1]);
          total += prod;
        } while (std::next_permutation(tau.begin(), tau.end()));
      } while (std::next_permutation(sigma.begin(), sigma.end()));
      std::vector<int> members(m);
      for (int i = 0; i < m; ++i) members[i] = i + 1;
      EXPECT_NEAR(pfaffian_sum_constcurv(MultiIndex(m, members), kappa), total, 1e-9)
          << "kappa " << kappa << " m " << m;
    }
}
