#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "uogp/bound.hpp"
#include "uogp/types.hpp"

namespace uogp {

/// Reference estimates of the critical constraint density obtained through
/// parametric RDT lifting (an independent, non-rigorous methodology). Each
/// record carries the lifting level r, the density estimate alpha_c^{(r)} at
/// margin 1, and — where published — the associated overlap sequence p_hat
/// and cluster-ratio sequence c_hat. The values are read-only constants.
struct RdtLiftingFixture {
  int r = 0;
  double alpha_c_r = 0.0;
  std::vector<double> p_hat;  ///< empty when not published for this level
  std::vector<double> c_hat;  ///< empty when not published for this level
};

/// All embedded lifting fixtures, levels r = 1..7, in ascending order.
const std::vector<RdtLiftingFixture>& rdt_fixtures();

/// Fixture for one lifting level. Throws NoFixture when r is outside 1..7.
const RdtLiftingFixture& rdt_fixture(int r);

/// Side-by-side record pairing a computed union bound at ultrametric depth s
/// with the lifting estimate at level r = s + 2. The record measures; it
/// draws no conclusion about which methodology is tighter in general.
struct ComparisonReport {
  int s = 0;
  int r = 0;
  double alpha_bound = 0.0;  ///< computed union bound
  double alpha_rdt = 0.0;    ///< lifting estimate alpha_c^{(r)}
  double delta = 0.0;        ///< alpha_bound - alpha_rdt (signed)
  std::vector<double> q;     ///< computed overlaps q_0..q_s
  std::vector<double> p_hat; ///< fixture overlaps (may be empty)
  std::vector<double> k;     ///< computed cluster sizes k_0..k_s
  std::vector<double> c_hat; ///< fixture cluster ratios (may be empty)
  /// True when alpha_bound <= alpha_rdt, the direction in which the bound
  /// and the estimate are conjectured to relate for optimal sequences.
  bool conjectured_direction = false;
};

/// Pairs `computed` with the level-(s+2) lifting fixture. `s` must match the
/// depth of the computed spec (InvalidArgument otherwise); NoFixture when no
/// fixture exists for level s + 2.
ComparisonReport comparison_report(int s, const BoundResult& computed);

/// Suggests an integer cluster-size sequence from a real-valued ratio
/// sequence c_hat (c_hat[0] = 1, all entries positive): k_0 = 1 and
/// k_i = k_{i-1} * round(c_hat[i] / c_hat[i-1]), rounding half away from
/// zero. Divisibility holds by construction. Throws ZeroRatio when a ratio
/// rounds to zero and InvalidArgument when it rounds to one (the sizes must
/// strictly increase) or the input is malformed.
ClusterSequence suggest_k_from_c(const std::vector<double>& c_hat);

/// FNV-1a digest of the canonical serialization of the embedded fixtures.
std::uint64_t fixture_digest();

/// Writes the canonical plain-text fixture table to `out` (one level per
/// line: r, alpha, then optional p/c sequences).
void write_fixture_file(std::ostream& out);

/// Re-reads a fixture file and checks it against the embedded constants.
/// Throws NoFixture when the file cannot be read or parsed and
/// FixtureMismatch when its digest differs from fixture_digest().
void verify_fixture_file(const std::string& path);

}  // namespace uogp
