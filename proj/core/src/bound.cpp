#include "uogp/bound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include <fmt/format.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include "uogp/parallel.hpp"
#include "uogp/special.hpp"

namespace uogp {
namespace {

/// Objective value reported for points outside the admissible region; large
/// but finite so simplex refinement backs away smoothly.
constexpr double kInfeasiblePenalty = 1e6;

/// Overlap sequence from gap exponents: q_l = 1 - sum_{j<=l} 10^{e_j}.
/// Returns nullopt when the gaps break the spec invariants.
std::optional<UltrametricSpec> spec_from_exponents(
    const ClusterSequence& k, double kappa, const std::vector<double>& e) {
  std::vector<double> q_inner(e.size());
  double drop = 0.0;
  for (std::size_t l = 0; l < e.size(); ++l) {
    drop += std::pow(10.0, e[l]);
    q_inner[l] = 1.0 - drop;
  }
  if (q_inner.back() < kEpsQ) return std::nullopt;
  UltrametricSpec spec;
  spec.s = static_cast<int>(e.size());
  spec.k = k;
  spec.q.q.reserve(e.size() + 2);
  spec.q.q.push_back(1.0);
  spec.q.q.insert(spec.q.q.end(), q_inner.begin(), q_inner.end());
  spec.q.q.push_back(0.0);
  spec.kappa = kappa;
  try {
    validate_spec(spec);
  } catch (const Error&) {
    return std::nullopt;
  }
  return spec;
}

/// alpha_bar at a gap-exponent point, or nullopt when the point is outside
/// the bound's domain (invalid sequence, infeasible program, underflow).
std::optional<double> objective(const ClusterSequence& k, double kappa,
                                const std::vector<double>& e, OverlapMode mode,
                                const QuadratureConfig& quad) {
  const auto spec = spec_from_exponents(k, kappa, e);
  if (!spec) return std::nullopt;
  try {
    return alpha_bar(*spec, mode, quad).alpha_bar;
  } catch (const Error& err) {
    switch (err.code()) {
      case ErrorCode::Infeasible:
      case ErrorCode::InfeasibleTriple:
      case ErrorCode::NotConverged:
      case ErrorCode::QuadratureUnderflow:
      case ErrorCode::SingularGap:
        return std::nullopt;
      default:
        throw;
    }
  }
}

struct GslObjective {
  const ClusterSequence* k;
  double kappa;
  OverlapMode mode;
  const QuadratureConfig* quad;
  int evaluations = 0;
};

double gsl_objective(const gsl_vector* v, void* raw) {
  auto* ctx = static_cast<GslObjective*>(raw);
  std::vector<double> e(v->size);
  for (std::size_t i = 0; i < v->size; ++i) e[i] = gsl_vector_get(v, i);
  ++ctx->evaluations;
  const auto value = objective(*ctx->k, ctx->kappa, e, ctx->mode, *ctx->quad);
  return value ? *value : kInfeasiblePenalty;
}

/// Nelder-Mead descent over gap exponents from the given start; returns the
/// best point seen (start included).
std::vector<double> nelder_mead(const ClusterSequence& k, double kappa,
                                OverlapMode mode, const QuadratureConfig& quad,
                                std::vector<double> start, double step,
                                int max_evaluations) {
  gsl_set_error_handler_off();
  const std::size_t dim = start.size();
  GslObjective ctx{&k, kappa, mode, &quad, 0};

  gsl_multimin_function func;
  func.n = dim;
  func.f = &gsl_objective;
  func.params = &ctx;

  gsl_vector* x = gsl_vector_alloc(dim);
  gsl_vector* steps = gsl_vector_alloc(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    gsl_vector_set(x, i, start[i]);
    gsl_vector_set(steps, i, step);
  }
  gsl_multimin_fminimizer* minimizer = gsl_multimin_fminimizer_alloc(
      gsl_multimin_fminimizer_nmsimplex2, dim);
  gsl_multimin_fminimizer_set(minimizer, &func, x, steps);

  std::vector<double> best = start;
  double best_value = gsl_objective(x, &ctx);
  while (ctx.evaluations < max_evaluations) {
    if (gsl_multimin_fminimizer_iterate(minimizer) != GSL_SUCCESS) break;
    if (minimizer->fval < best_value) {
      best_value = minimizer->fval;
      for (std::size_t i = 0; i < dim; ++i)
        best[i] = gsl_vector_get(minimizer->x, i);
    }
    if (gsl_multimin_fminimizer_size(minimizer) < 1e-5) break;
  }
  gsl_multimin_fminimizer_free(minimizer);
  gsl_vector_free(steps);
  gsl_vector_free(x);
  return best;
}

/// One golden-section sweep per coordinate around the current point.
std::vector<double> coordinate_descent(const ClusterSequence& k, double kappa,
                                       OverlapMode mode,
                                       const QuadratureConfig& quad,
                                       std::vector<double> point,
                                       int max_evaluations) {
  constexpr double kGolden = 0.6180339887498949;
  int evals = 0;
  const auto value_at = [&](const std::vector<double>& e) {
    ++evals;
    const auto v = objective(k, kappa, e, mode, quad);
    return v ? *v : kInfeasiblePenalty;
  };
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t i = 0; i < point.size() && evals < max_evaluations; ++i) {
      double lo = point[i] - 0.3, hi = point[i] + 0.3;
      double m1 = hi - kGolden * (hi - lo), m2 = lo + kGolden * (hi - lo);
      std::vector<double> e = point;
      e[i] = m1;
      double f1 = value_at(e);
      e[i] = m2;
      double f2 = value_at(e);
      while (hi - lo > 1e-4 && evals < max_evaluations) {
        if (f1 < f2) {
          hi = m2;
          m2 = m1;
          f2 = f1;
          m1 = hi - kGolden * (hi - lo);
          e[i] = m1;
          f1 = value_at(e);
        } else {
          lo = m1;
          m1 = m2;
          f1 = f2;
          m2 = lo + kGolden * (hi - lo);
          e[i] = m2;
          f2 = value_at(e);
        }
      }
      point[i] = 0.5 * (lo + hi);
    }
  }
  return point;
}

}  // namespace

BoundResult alpha_bar(const UltrametricSpec& spec, OverlapMode mode,
                      const QuadratureConfig& config) {
  BoundResult result;
  result.spec = validate_spec(spec);
  result.mode = mode;
  result.h = tuple_entropy(spec, mode);
  const ProbFactor prob = nested_prob(spec, config);
  result.p = prob.p;
  result.log_p = prob.log_p;
  result.alpha_bar = -result.h * kLn2 / result.log_p;
  return result;
}

bool ogp_indicator(const UltrametricSpec& spec, double alpha, OverlapMode mode,
                   const QuadratureConfig& config) {
  return alpha > alpha_bar(spec, mode, config).alpha_bar;
}

BoundResult optimize_q(const ClusterSequence& k, double kappa,
                       const SearchConfig& search, OverlapMode mode) {
  if (k.k.empty() || k.k.front() != 1)
    throw Error(ErrorCode::InvalidArgument, "cluster chain must start at 1");
  if (search.resolution < 3)
    throw Error(ErrorCode::InvalidArgument, "grid resolution must be >= 3");
  const int s = k.levels();
  if (s < 1)
    throw Error(ErrorCode::InvalidArgument,
                "optimize_q needs at least one cluster level");
  {
    // Surface chain/margin problems before the scan: a malformed input must
    // not masquerade as an infeasible search.
    std::vector<double> probe(s);
    double drop = 0.0;
    for (int l = 0; l < s; ++l) {
      drop += std::pow(10.0, -1.0 - l);
      probe[l] = 1.0 - drop;
    }
    make_spec(k.k, probe, kappa);
  }

  QuadratureConfig coarse = search.quadrature;
  coarse.nodes_per_level = search.coarse_nodes;
  validate_config(coarse);
  validate_config(search.quadrature);

  // Log-uniform gap grid, scanned in parallel.
  std::vector<double> ticks(search.resolution);
  for (int i = 0; i < search.resolution; ++i)
    ticks[i] = search.exponent_lo + (search.exponent_hi - search.exponent_lo) *
                                        i / (search.resolution - 1);
  std::int64_t n_points = 1;
  for (int l = 0; l < s; ++l) n_points *= search.resolution;

  const auto point_at = [&](std::int64_t index) {
    std::vector<double> e(s);
    std::int64_t rest = index;
    for (int l = 0; l < s; ++l) {
      e[l] = ticks[rest % search.resolution];
      rest /= search.resolution;
    }
    return e;
  };
  std::vector<double> values(n_points,
                             std::numeric_limits<double>::quiet_NaN());
  parallel_for_chunks(n_points, [&](std::int64_t index) {
    const auto value = objective(k, kappa, point_at(index), mode, coarse);
    if (value) values[index] = *value;
  });
  std::int64_t best_index = -1;
  for (std::int64_t i = 0; i < n_points; ++i)
    if (std::isfinite(values[i]) &&
        (best_index < 0 || values[i] < values[best_index]))
      best_index = i;
  if (best_index < 0)
    throw Error(ErrorCode::NoFeasiblePoint,
                "no admissible overlap sequence on the search grid");
  const std::vector<double> best_point = point_at(best_index);

  std::vector<double> refined = best_point;
  switch (search.refinement) {
    case Refinement::none:
      break;
    case Refinement::nelder_mead: {
      const int coarse_budget = search.max_evaluations * 3 / 4;
      refined = nelder_mead(k, kappa, mode, coarse, refined, 0.12,
                            coarse_budget);
      refined = nelder_mead(k, kappa, mode, search.quadrature, refined, 0.02,
                            search.max_evaluations - coarse_budget);
      break;
    }
    case Refinement::coordinate:
      refined = coordinate_descent(k, kappa, mode, coarse, refined,
                                   search.max_evaluations);
      break;
  }

  const auto final_spec = spec_from_exponents(k, kappa, refined);
  if (final_spec) {
    try {
      return alpha_bar(*final_spec, mode, search.quadrature);
    } catch (const Error&) {
      // fall back to the grid optimum below
    }
  }
  const auto grid_spec = spec_from_exponents(k, kappa, best_point);
  return alpha_bar(*grid_spec, mode, search.quadrature);
}

double capacity_union_bound(double kappa) {
  if (!(kappa > 0.0))
    throw Error(ErrorCode::NonPositiveKappa,
                fmt::format("margin must be positive, got {}", kappa));
  return -kLn2 / log_gauss_window(0.0, 1.0, kappa);
}

}  // namespace uogp
