#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include <fmt/format.h>

#include "uogp/combfactor.hpp"
#include "uogp/ultrametric.hpp"

namespace uogp {
namespace {

constexpr int kMaxN = 20;
constexpr int kMaxTuple = 4;

/// C(n, r) for n <= 20 fits comfortably in 64 bits.
std::uint64_t binomial(int n, int r) {
  std::uint64_t value = 1;
  for (int i = 1; i <= r; ++i)
    value = value * static_cast<std::uint64_t>(n - r + i) /
            static_cast<std::uint64_t>(i);
  return value;
}

}  // namespace

std::uint64_t brute_force_count(int n, const UltrametricSpec& spec) {
  validate_spec(spec);
  const int k = spec.k.total();
  if (n < 1 || n > kMaxN)
    throw Error(ErrorCode::SizeLimit,
                fmt::format("dimension {} outside the exact-count range 1..{}",
                            n, kMaxN));
  if (k > kMaxTuple)
    throw Error(ErrorCode::SizeLimit,
                fmt::format("tuple size {} exceeds the exact-count maximum {}",
                            k, kMaxTuple));
  if (k == 1) return std::uint64_t{1} << n;

  // Integer agreement targets for every vector pair.
  const int n_pairs = k * (k - 1) / 2;
  std::vector<int> target(n_pairs);
  {
    int idx = 0;
    for (int t = 2; t <= k; ++t) {
      for (int j = 1; j < t; ++j, ++idx) {
        const double exact =
            0.5 * (1.0 + spec.q.q[level_of_pair(spec, j, t)]) * n;
        const double rounded = std::round(exact);
        if (std::abs(exact - rounded) > 1e-9)
          throw Error(ErrorCode::TargetsNotIntegral,
                      fmt::format("pair ({}, {}) needs {:.6g} agreements of {}",
                                  j, t, exact, n));
        target[idx] = static_cast<int>(rounded);
      }
    }
  }

  // With the first vector pinned to all-plus, a coordinate is classified by
  // the agreement pattern of vectors 2..k (pattern bit k - t for vector t).
  // Count coordinate fills per pattern and sum multinomials over the fills
  // whose induced pairwise agreement counts hit every target.
  const int n_patterns = 1 << (k - 1);
  std::vector<std::array<bool, 6>> contributes(n_patterns);
  for (int v = 0; v < n_patterns; ++v) {
    int idx = 0;
    for (int t = 2; t <= k; ++t) {
      const bool t_bit = ((v >> (k - t)) & 1) != 0;
      for (int j = 1; j < t; ++j, ++idx) {
        const bool j_bit = j == 1 || (((v >> (k - j)) & 1) != 0);
        contributes[v][idx] = j == 1 ? t_bit : (j_bit == t_bit);
      }
    }
  }

  unsigned __int128 total = 0;
  std::vector<int> residual(target);
  const auto dfs = [&](const auto& self, int v, int remaining,
                       std::uint64_t ways) -> void {
    if (v == n_patterns - 1) {
      // Last pattern takes everything left; targets must close exactly.
      for (int idx = 0; idx < n_pairs; ++idx) {
        const int need = contributes[v][idx] ? remaining : 0;
        if (residual[idx] != need) return;
      }
      total += ways;
      return;
    }
    for (int fill = 0; fill <= remaining; ++fill) {
      bool ok = true;
      for (int idx = 0; idx < n_pairs && ok; ++idx) {
        const int left = residual[idx] - (contributes[v][idx] ? fill : 0);
        ok = left >= 0 && left <= remaining - fill;
      }
      if (ok) {
        for (int idx = 0; idx < n_pairs; ++idx)
          if (contributes[v][idx]) residual[idx] -= fill;
        self(self, v + 1, remaining - fill,
             ways * binomial(remaining, fill));
        for (int idx = 0; idx < n_pairs; ++idx)
          if (contributes[v][idx]) residual[idx] += fill;
      }
    }
  };
  dfs(dfs, 0, n, 1);

  // Restore the 2^n choices of the pinned first vector.
  constexpr unsigned __int128 kMax64 = ~std::uint64_t{0};
  if (total > (kMax64 >> n))
    throw Error(ErrorCode::SizeLimit, "exact count exceeds the 64-bit range");
  return static_cast<std::uint64_t>(total << n);
}

}  // namespace uogp
