#pragma once

#include <cstdint>
#include <vector>

#include "uogp/errors.hpp"

namespace uogp {

/// Minimum admissible gap between consecutive overlap values. The covariance
/// coefficient recursion has a 1/(q_i - q_{i+1}) pole; optima at table scale
/// never need smaller gaps.
inline constexpr double kEpsQ = 1e-6;

/// Strictly increasing cluster-size chain [k_0, ..., k_s] with k_0 = 1 and
/// k_{i+1} divisible by k_i. k_s is the total number of vectors.
struct ClusterSequence {
  std::vector<int> k;

  int levels() const { return static_cast<int>(k.size()) - 1; }
  int total() const { return k.back(); }
  /// Child multiplicity k_i / k_{i-1} for level i in 1..s.
  int ratio(int i) const { return k[i] / k[i - 1]; }
};

/// Strictly decreasing overlap chain [q_0, ..., q_{s+1}] with q_0 = 1 and
/// q_{s+1} = 0. Interior entries are the admissible pairwise overlaps.
struct OverlapSequence {
  std::vector<double> q;

  int levels() const { return static_cast<int>(q.size()) - 2; }
  double gap(int i) const { return q[i] - q[i + 1]; }
};

/// One bound evaluation point: s ultrametric levels, cluster sizes, overlaps
/// and the margin kappa.
struct UltrametricSpec {
  int s = 0;
  ClusterSequence k;
  OverlapSequence q;
  double kappa = 1.0;
};

/// Validates all structural invariants; returns the spec unchanged on
/// success. Throws Error with the code naming the violated invariant.
const UltrametricSpec& validate_spec(const UltrametricSpec& spec);

/// Convenience constructor from the interior data: k = [1, k_1, ...],
/// q_inner = [q_1, ..., q_s] (the fixed q_0 = 1 / q_{s+1} = 0 are implied).
/// The result is validated.
UltrametricSpec make_spec(std::vector<int> k, std::vector<double> q_inner,
                          double kappa);

}  // namespace uogp
