#pragma once

#include <vector>

#include "uogp/errors.hpp"

namespace uogp {

/// Knobs for the nested-probability evaluators. Doubling nodes_per_level is
/// the standard self-consistency check; truncation is the half-width (in
/// standard deviations) kept at each Gaussian integral.
struct QuadratureConfig {
  enum class Mode {
    /// Tensor Gauss-Hermite nesting; accurate at moderate overlaps, cheap.
    gauss_hermite,
    /// Panel-based level cascade with feature-width refinement; accurate
    /// over the whole admissible overlap range.
    adaptive,
  };

  int nodes_per_level = 80;
  double truncation = 10.0;
  Mode mode = Mode::adaptive;
};

/// Nodes x and weights w of an n-point rule for E[f(Z)], Z standard normal:
/// sum_i w[i] f(x[i]) with sum w = 1. Exact for polynomials to degree 2n-1.
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

/// Gauss-Hermite rule (probabilists' weight, normalized to an expectation).
/// Requires n >= 1; results are cached per n.
const GaussRule& gauss_hermite(int n);

/// Gauss-Legendre rule on [-1, 1] with sum w = 2. Requires n >= 1; cached.
const GaussRule& gauss_legendre(int n);

/// Validates nodes_per_level >= 16 and truncation > 0.
const QuadratureConfig& validate_config(const QuadratureConfig& cfg);

}  // namespace uogp
