#pragma once

#include "uogp/combfactor.hpp"
#include "uogp/probfactor.hpp"
#include "uogp/quadrature.hpp"
#include "uogp/types.hpp"

namespace uogp {

/// One union-bound evaluation: counting exponent h (bits), window
/// probability p (natural log alongside), and the resulting density bound
/// alpha_bar = -h ln2 / ln p above which the expected tuple count vanishes.
struct BoundResult {
  UltrametricSpec spec;
  double h = 0.0;
  double p = 0.0;
  double log_p = 0.0;
  double alpha_bar = 0.0;
  OverlapMode mode = OverlapMode::level_consistent;
};

/// Local refinement strategy applied after the grid scan.
enum class Refinement { none, nelder_mead, coordinate };

/// Search controls for optimize_q. The overlap sequence is parameterized by
/// the base-10 logarithms of the level gaps q_{l-1} - q_l (optima sit close
/// to q = 1, so gaps are scanned log-uniformly).
struct SearchConfig {
  /// Grid points per gap exponent (>= 3).
  int resolution = 14;
  /// Scanned exponent range: gaps from 10^lo to 10^hi.
  double exponent_lo = -3.5;
  double exponent_hi = -0.25;
  Refinement refinement = Refinement::nelder_mead;
  /// Cap on objective evaluations spent inside refinement.
  int max_evaluations = 400;
  /// Quadrature for the reported result and the final polish.
  QuadratureConfig quadrature{};
  /// Cheaper node count used during the scan and first refinement pass.
  int coarse_nodes = 48;
};

/// Union-bound density threshold at a fixed spec. h comes from the closed
/// forms (tuple sizes 2, 3) or the entropy program; p from nested
/// quadrature. alpha_bar is computed from log p directly so near-one
/// probabilities lose no precision.
BoundResult alpha_bar(const UltrametricSpec& spec,
                      OverlapMode mode = OverlapMode::level_consistent,
                      const QuadratureConfig& config = {});

/// Whether the union bound certifies the vanishing-probability implication
/// at constraint density alpha: true iff 2^h p^alpha < 1, i.e. strictly
/// alpha > alpha_bar.
bool ogp_indicator(const UltrametricSpec& spec, double alpha,
                   OverlapMode mode = OverlapMode::level_consistent,
                   const QuadratureConfig& config = {});

/// Minimal alpha_bar over admissible strictly-decreasing overlap sequences
/// for the given cluster chain: log-gap grid scan, then derivative-free
/// refinement from the best grid point. Infeasible points are skipped;
/// throws NoFeasiblePoint if the whole grid is infeasible. Deterministic
/// for a fixed config.
BoundResult optimize_q(const ClusterSequence& k, double kappa,
                       const SearchConfig& search = {},
                       OverlapMode mode = OverlapMode::level_consistent);

/// Single-vector first-moment capacity bound -log 2 / log P(|N(0,1)| <= kappa).
double capacity_union_bound(double kappa);

}  // namespace uogp
