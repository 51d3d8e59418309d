#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "uogp/quadrature.hpp"
#include "uogp/types.hpp"
#include "uogp/ultrametric.hpp"

namespace uogp {

/// Probability that one ultrametrically correlated Gaussian family lands in
/// the margin window, with the inputs echoed for manifests.
struct ProbFactor {
  double p = 0.0;
  double log_p = 0.0;
  UltrametricSpec spec;
  QuadratureConfig config;
};

/// Monte Carlo estimate of the same window probability.
struct McEstimate {
  double p_hat = 0.0;
  double std_error = 0.0;
  std::uint64_t hits = 0;
  std::uint64_t samples = 0;
};

/// log of the innermost kernel as a function of the whitened mean shift D
/// and the rescaled margin E = sqrt(c[0]) * kappa:
///   log( e^{D^2/2} * (erf((D+E)/sqrt 2) - erf((D-E)/sqrt 2)) / 2 ).
/// Overflow-safe for any D (scaled-erfc evaluation).
double log_inner_kernel(double D, double E);

/// Innermost kernel at shared-level shifts z (one entry per level 1..s):
/// D = sum_i beta_i z_i. Linear-space value; may overflow to +inf when
/// D^2/2 exceeds the double exponent range (use log_inner_kernel then).
double inner_kernel(const std::vector<double>& z, const CovarianceCoeffs& coeffs,
                    double kappa);

/// log det of the overlap matrix in closed form (block-constant eigenvalues
/// lambda_j = sum_{l<=j} (q_l - q_{l+1}) k_l with multiplicity
/// k_s/k_j - k_s/k_{j+1}, and 1 for the top eigenvalue).
double log_det_overlap(const UltrametricSpec& spec);

/// Window probability p = P(all k_s coordinates within [-kappa, kappa]) for
/// the ultrametric Gaussian family, via nested level-by-level quadrature.
/// Throws QuadratureUnderflow when p is below the double range (the message
/// carries log_p).
ProbFactor nested_prob(const UltrametricSpec& spec,
                       const QuadratureConfig& config = {});

/// Monte Carlo window probability for an arbitrary symmetric PSD covariance.
/// Deterministic per (seed, samples) and independent of the worker count.
McEstimate mc_orthant_prob(const Eigen::MatrixXd& Q, double kappa,
                           std::uint64_t samples, std::uint64_t seed);

namespace detail {

/// Tensor nesting over per-level Gauss-Hermite grids (cost O(nodes^s));
/// accurate at moderate overlaps.
double log_nested_prob_gh(const UltrametricSpec& spec,
                          const QuadratureConfig& config);

/// Level cascade with panel quadrature sized to the sharpest feature width;
/// accurate over the whole admissible overlap range.
double log_nested_prob_adaptive(const UltrametricSpec& spec,
                                const QuadratureConfig& config);

}  // namespace detail
}  // namespace uogp
