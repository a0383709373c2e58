#pragma once

#include <Eigen/Dense>
#include <map>
#include <vector>

namespace lefschetz {

// Strictly increasing subset of {1..n} (1-based members).
class MultiIndex {
 public:
  MultiIndex(int rank, std::vector<int> members);
  int rank() const { return rank_; }
  int size() const { return static_cast<int>(members_.size()); }
  const std::vector<int>& members() const { return members_; }
  bool contains(int i) const;
  MultiIndex complement() const;
  bool operator==(const MultiIndex&) const = default;
  bool operator<(const MultiIndex& o) const { return members_ < o.members_; }

 private:
  int rank_;
  std::vector<int> members_;
};

// All k-element multi-indices of {1..n} in lexicographic order.
std::vector<MultiIndex> multi_indices(int n, int k);
// All even-size multi-indices, increasing size.
std::vector<MultiIndex> even_multi_indices(int n);

// Parity of the shuffle permutation (I, I').
int shuffle_sign(const MultiIndex& I);

// Throws NotAntisymmetric. Empty matrix -> 1.
double pfaffian(const Eigen::MatrixXd& A);

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& A, const MultiIndex& I);

// Coefficient table of the Thom form at fiber point x for scalar-valued
// curvature entries: c_I multiplies (dx)^{I'} for every even |I|.
struct MQCoefficients {
  int rank = 0;
  Eigen::VectorXd x;
  Eigen::MatrixXd omega;
  std::map<std::vector<int>, double> coefficients;
  double coefficient(const MultiIndex& I) const;
};

MQCoefficients mq_coefficients(int n, const Eigen::MatrixXd& omega, const Eigen::VectorXd& x);

// Integral over the fiber R^n of the top vertical-degree part (tensor
// Gauss-Hermite quadrature).
double fiber_integral(int n, const Eigen::MatrixXd& omega, int points_per_axis = 24);

// Double-permutation curvature sum over I for R_ijkl = -kappa(d_ik d_jl - d_il d_jk).
double pfaffian_sum_constcurv(const MultiIndex& I, double kappa);

// Gauss-Hermite nodes and weights for weight e^{-x^2}.
void gauss_hermite(int m, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace lefschetz
