#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "uogp/types.hpp"

namespace uogp {

/// Rule for the handful of sign-overlap targets that involve the third
/// vector of a tuple. The two rules coincide unless the first cluster holds
/// three or more vectors (k_1 >= 3).
enum class OverlapMode {
  /// Take the base-scheme adjustment verbatim: the third-vector targets use
  /// the second listed overlap regardless of which cluster the pair shares.
  literal,
  /// Every pairwise target uses the overlap of the deepest cluster level the
  /// pair shares, (1 + q_level(i,j)) / 2. Default everywhere.
  level_consistent,
};

/// Sign-overlap parameters of the base counting scheme. q_sx is indexed by
/// cluster level: q_sx[l] = (1 + q_l) / 2, so q_sx[0] = 1 and q_sx has s + 1
/// entries. q_s1 is the two-vector target and q_s2 the adjusted three-vector
/// block length.
struct OverlapParams {
  std::vector<double> q_sx;
  double q_s1 = 0.0;
  double q_s2 = 0.0;
};

/// Equality-constraint system A a = b of the tuple-counting program for
/// k = cluster size tuples. Columns cover every partition segment introduced
/// by the recursive construction; one closing slack segment is tracked
/// implicitly (n_vars = cols + 1) and enters only the normalization.
struct ConstraintSystem {
  int k = 0;
  Eigen::SparseMatrix<double> A;
  Eigen::VectorXd b;
  std::int64_t n_vars = 0;
};

/// Solution of the entropy-maximization program over a ConstraintSystem.
/// `a` lists all printed variables plus the closing slack (last entry);
/// entries describing the finest partition sum to one, aggregate entries
/// equal the sums of their sub-segments. `dual` holds multipliers for the
/// constraint rows plus the normalization row (last). h is in bits.
struct EntropySolution {
  Eigen::VectorXd a;
  double h = 0.0;
  Eigen::VectorXd dual;
  double kkt_residual = 0.0;
};

/// Sign-overlap parameters for the spec under the given target rule.
/// Throws InfeasibleTriple if the adjusted block length q_s2 is negative.
OverlapParams overlap_params(const UltrametricSpec& spec,
                             OverlapMode mode = OverlapMode::level_consistent);

/// Closed-form tuple entropy (bits) for pair (k=2) and triple (k=3) tuples
/// at a single shared overlap q in [0, 1).
double closed_form_h(double q, int k);

/// Number of columns / rows of the step-k constraint matrix
/// (cols(k) = 2^k - k - 5, rows(4) = 6, rows(k) = rows(k-1) + k - 1 + 2^(k-2) - 1).
std::int64_t system_cols(int k);
std::int64_t system_rows(int k);

/// Constraint matrix A for a k-tuple, built recursively: the step-m block
/// stacks m-1 pairwise-overlap rows (columns are the binary representations
/// of the pair-agreement signatures) over 2^(m-2)-1 interval-splitting rows
/// that tie each pair of child segments to its parent segment one step up.
/// Entries are in {-1, 0, 1}. Throws SizeLimit above k = 12 by default.
ConstraintSystem build_A(int k);

/// Right-hand side matching build_A(spec.k.back()): pairwise rows carry the
/// level sign-overlap targets, splitting rows carry zero except the base
/// block-length entries derived from overlap_params(spec, mode).
Eigen::VectorXd build_b(const UltrametricSpec& spec,
                        OverlapMode mode = OverlapMode::level_consistent);

/// Convenience: build_A + build_b for the spec's tuple size.
ConstraintSystem build_system(
    const UltrametricSpec& spec,
    OverlapMode mode = OverlapMode::level_consistent);

/// Maximize vector entropy subject to the constraint system, the closing
/// normalization, and nonnegativity. Strictly concave over the finest
/// partition; solved through the smooth dual with safeguarded Newton steps.
/// Throws Infeasible when no nonnegative solution exists and NotConverged
/// (with diagnostics) if the iteration stalls above tolerance.
EntropySolution max_entropy_solve(const ConstraintSystem& sys);

/// Tuple entropy h (bits) for the spec: closed forms for tuple sizes 2 and 3,
/// the entropy program otherwise. This is the production path for bounds.
double tuple_entropy(const UltrametricSpec& spec,
                     OverlapMode mode = OverlapMode::level_consistent);

/// Exact number of k_s-tuples of sign vectors in {-1,+1}^n whose pairwise
/// sign-agreement counts hit the level targets (1 + q_level(i,j)) / 2 * n
/// exactly. The first vector is fixed by symmetry and the result multiplied
/// by 2^n. Requires n <= 20, k_s <= 4, and integral targets.
std::uint64_t brute_force_count(int n, const UltrametricSpec& spec);

/// Plain-text sparse-triplet export: a header line "rows cols nnz" followed
/// by one "row col value" line per stored entry (indices 0-based).
void write_sparse_triplets(const ConstraintSystem& sys, std::ostream& out);

namespace detail {

/// Pairwise-target entropy program over the finest partition only (one
/// variable per agreement pattern of vectors 2..k against the first).
/// Valid for any tuple size >= 2; used as the independent construction the
/// recursive system is checked against, and as the production solve.
EntropySolution leaf_entropy_solve(
    const UltrametricSpec& spec,
    OverlapMode mode = OverlapMode::level_consistent);

}  // namespace detail
}  // namespace uogp
