#include "uogp/probfactor.hpp"

#include <cmath>
#include <cstddef>
#include <span>

#include <fmt/format.h>

#include "uogp/special.hpp"

namespace uogp {

double log_inner_kernel(double D, double E) {
  return 0.5 * D * D + log_erf_diff_half(D, E);
}

double inner_kernel(const std::vector<double>& z, const CovarianceCoeffs& coeffs,
                    double kappa) {
  const int s = static_cast<int>(coeffs.c.size()) - 1;
  if (static_cast<int>(z.size()) != s) {
    raise(ErrorCode::IndexOutOfRange,
          fmt::format("kernel shift has {} entries, expected {}", z.size(), s));
  }
  double D = 0.0;
  for (int i = 1; i <= s; ++i) {
    D += coeffs.beta(i) * z[static_cast<std::size_t>(i) - 1];
  }
  return std::exp(log_inner_kernel(D, coeffs.scaled_margin(kappa)));
}

double log_det_overlap(const UltrametricSpec& spec) {
  const auto& k = spec.k.k;
  const auto& q = spec.q.q;
  const int s = spec.s;
  const int n = spec.k.total();

  double log_det = 0.0;
  double lambda = 0.0;
  for (int j = 0; j <= s; ++j) {
    lambda += (q[j] - q[j + 1]) * k[j];
    const int mult = (j < s) ? (n / k[j] - n / k[j + 1]) : 1;
    if (mult > 0) log_det += mult * std::log(lambda);
  }
  return log_det;
}

namespace detail {

double log_nested_prob_gh(const UltrametricSpec& spec,
                          const QuadratureConfig& config) {
  const int s = spec.s;
  const int N = config.nodes_per_level;
  const auto coeffs = covariance_coefficients(spec);
  const double E = coeffs.scaled_margin(spec.kappa);
  const auto& rule = gauss_hermite(N);

  // Grid sizes: the innermost kernel is tabulated on the full tensor grid of
  // the s outer variables, each higher level on the remaining ones.
  double grid_size = 1.0;
  for (int i = 0; i < s; ++i) grid_size *= N;
  if (grid_size > 2.0e8) {
    raise(ErrorCode::SizeLimit,
          fmt::format("tensor grid of {:.3g} points exceeds the limit; lower "
                      "nodes_per_level or use the adaptive mode",
                      grid_size));
  }

  // shifts[m] enumerates sum_{j >= i+1} beta_j x_{a_j} for the current level
  // i, ordered so that the level-(i-1) grid is [node][tail] contiguous.
  std::vector<double> shifts{0.0};
  std::vector<std::vector<double>> grids(static_cast<std::size_t>(s) + 1);
  grids[static_cast<std::size_t>(s)] = shifts;
  for (int i = s - 1; i >= 0; --i) {
    const double beta = coeffs.beta(i + 1);
    const auto& outer = grids[static_cast<std::size_t>(i) + 1];
    std::vector<double> g(outer.size() * static_cast<std::size_t>(N));
    for (int b = 0; b < N; ++b) {
      const double shift = beta * rule.x[static_cast<std::size_t>(b)];
      for (std::size_t m = 0; m < outer.size(); ++m) {
        g[static_cast<std::size_t>(b) * outer.size() + m] = shift + outer[m];
      }
    }
    grids[static_cast<std::size_t>(i)] = std::move(g);
  }

  std::vector<double> logw(static_cast<std::size_t>(N));
  for (int b = 0; b < N; ++b) {
    logw[static_cast<std::size_t>(b)] =
        std::log(rule.w[static_cast<std::size_t>(b)]);
  }

  // Innermost kernel values on the full grid, then fold one level at a time.
  std::vector<double> level(grids[0].size());
  for (std::size_t m = 0; m < level.size(); ++m) {
    level[m] = log_inner_kernel(grids[0][m], E);
  }
  std::vector<double> terms(static_cast<std::size_t>(N));
  for (int i = 1; i <= s; ++i) {
    const double r = spec.k.ratio(i);
    const std::size_t sz = grids[static_cast<std::size_t>(i)].size();
    std::vector<double> next(sz);
    for (std::size_t m = 0; m < sz; ++m) {
      for (int b = 0; b < N; ++b) {
        terms[static_cast<std::size_t>(b)] =
            logw[static_cast<std::size_t>(b)] +
            r * level[static_cast<std::size_t>(b) * sz + m];
      }
      next[m] = log_sum_exp(terms);
    }
    level = std::move(next);
  }

  const int n = spec.k.total();
  const double prefactor =
      -0.5 * log_det_overlap(spec) - 0.5 * n * std::log(coeffs.c[0]);
  return prefactor + level[0];
}

}  // namespace detail

ProbFactor nested_prob(const UltrametricSpec& spec,
                       const QuadratureConfig& config) {
  validate_spec(spec);
  validate_config(config);

  double log_p;
  if (spec.s == 0) {
    log_p = log_gauss_window(0.0, 1.0, spec.kappa);
  } else if (config.mode == QuadratureConfig::Mode::gauss_hermite) {
    log_p = detail::log_nested_prob_gh(spec, config);
  } else {
    log_p = detail::log_nested_prob_adaptive(spec, config);
  }
  log_p = std::min(log_p, 0.0);

  if (log_p < -745.0) {
    raise(ErrorCode::QuadratureUnderflow,
          fmt::format("window probability underflows the double range, "
                      "log_p = {:.6e}",
                      log_p));
  }

  ProbFactor out;
  out.log_p = log_p;
  out.p = std::exp(log_p);
  out.spec = spec;
  out.config = config;
  return out;
}

}  // namespace uogp
