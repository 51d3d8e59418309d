#pragma once

#include <vector>

#include <Eigen/Dense>

#include "uogp/types.hpp"

namespace uogp {

/// Level at which vectors i and j (1-based, 1..k_s) first share a cluster:
/// the smallest l with ceil(i/k_l) == ceil(j/k_l). Returns 0 iff i == j.
int level_of_pair(const UltrametricSpec& spec, int i, int j);

/// Dense k_s x k_s overlap matrix Q with Q_ij = q_{level_of_pair(i,j)}
/// (so the diagonal is 1).
Eigen::MatrixXd build_overlap_matrix(const UltrametricSpec& spec);

/// Coefficients of the block-constant expansion of Q^{-1},
///   Q^{-1} = c[0] * I + sum_{i=1}^{s} c[i] * B_{k_i},
/// where B_{k_i} is the 0/1 block matrix of the level-i partition (all-ones
/// blocks of size k_i on the diagonal). c[0] > 0 and c[i] < 0 for i >= 1.
struct CovarianceCoeffs {
  std::vector<double> c;

  /// Mixing weight of the level-i shared Gaussian in the whitened
  /// decomposition: sqrt(-c[i]) / sqrt(c[0]), for i in 1..s.
  double beta(int i) const;
  /// Rescaled margin sqrt(c[0]) * kappa.
  double scaled_margin(double kappa) const;
};

/// Computes the c coefficients by the telescoping recursion
///   c[0] = 1 / (1 - q_1),
///   c[i] = -S_i^2 / (1/(q_i - q_{i+1}) + k_i * S_i),
/// with S_i = sum_{j<=i} k_{j-1} * c[j-1]. Throws SingularGap if an overlap
/// gap is not strictly positive.
CovarianceCoeffs covariance_coefficients(const UltrametricSpec& spec);

}  // namespace uogp
