#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "output.hpp"
#include "uogp/bound.hpp"

namespace uogp::cli {

/// Search controls shared by the sweep-style commands; mirrors SearchConfig
/// plus the quadrature node count used for the final reported values.
struct SearchOptions {
  int grid = 14;
  Refinement refine = Refinement::nelder_mead;
  int max_evaluations = 400;
  int nodes = 80;
  int coarse_nodes = 48;
};

struct OutputOptions {
  std::string out;
  std::string format = "csv";
};

/// One reference column of a published result table: the cluster chain, the
/// printed optimal overlaps, and the printed density bound.
struct TableCase {
  std::vector<int> k;
  std::vector<double> q_ref;
  double alpha_ref = 0.0;
};

struct ReferenceTable {
  int id = 0;
  std::vector<TableCase> cases;
};

/// Embedded fixture data for result tables 2..18 (cumulative columns, as
/// printed). Throws UnknownTable for any other id.
const ReferenceTable& reference_table(int id);

/// Expected digest of the embedded lifting fixture table.
inline constexpr std::uint64_t kRdtDigest = 0xe97451cfee1b6800ull;

int run_table(int id, const SearchOptions& search, OverlapMode mode,
              const OutputOptions& output);

int run_bound(const std::vector<int>& k, const std::vector<double>& q,
              double kappa, OverlapMode mode, int nodes,
              const std::string& dump_path, const OutputOptions& output);

int run_figure(int id, const OutputOptions& output);

int run_verify(const std::string& scope, std::uint64_t seed,
               std::uint64_t samples, int nodes,
               const std::string& fixture_path, const OutputOptions& output);

int run_suggest_k(const std::vector<double>& c_hat,
                  const OutputOptions& output);

}  // namespace uogp::cli
