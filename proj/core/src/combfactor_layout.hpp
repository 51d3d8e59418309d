#pragma once

#include <cstdint>
#include <utility>

// Column layout of the recursive tuple-counting system.
//
// Variables describe partition segments of [0, 1]. A segment introduced at
// step m (4 <= m <= k) is identified by the agreement pattern of vectors
// 2..m against vector 1 on that segment: an (m-1)-bit code v whose bit
// (m - t) records whether vector t agrees with vector 1 (vector 2 is the
// most significant bit, vector m the least). The pattern 2^(m-1) - 2
// (everyone agrees except vector m) is the step-m slack segment and owns no
// column; the step-k slack is the single implicit variable of the system.
//
// Step blocks are stored newest first (step k leftmost). Within a block the
// columns run: children that agree with vector 1, by parent pattern
// ascending, except the all-agree child which closes the block; then
// children that disagree, by parent pattern ascending.

namespace uogp::detail {

inline std::int64_t block_cols(int m) { return (std::int64_t{1} << (m - 1)) - 1; }

/// Offset of the step-m block among the columns of the step-k system.
inline std::int64_t block_offset(int k, int m) {
  std::int64_t off = 0;
  for (int newer = k; newer > m; --newer) off += block_cols(newer);
  return off;
}

/// Column index of the step-m segment with agreement pattern v.
inline std::int64_t col_of_pattern(int k, int m, std::uint32_t v) {
  const std::uint32_t all_agree = (1u << (m - 1)) - 1;
  std::int64_t within;
  if (v == all_agree) {
    within = block_cols(m) - 1;
  } else if ((v & 1u) != 0) {
    within = v >> 1;
  } else {
    within = ((std::int64_t{1} << (m - 2)) - 1) + (v >> 1);
  }
  return block_offset(k, m) + within;
}

/// Inverse of col_of_pattern: (step, pattern) of a column index.
inline std::pair<int, std::uint32_t> pattern_of_col(int k, std::int64_t col) {
  int m = k;
  while (col >= block_cols(m)) {
    col -= block_cols(m);
    --m;
  }
  const std::int64_t plus_region = (std::int64_t{1} << (m - 2)) - 1;
  std::uint32_t v;
  if (col == block_cols(m) - 1) {
    v = (1u << (m - 1)) - 1;
  } else if (col < plus_region) {
    v = (static_cast<std::uint32_t>(col) << 1) | 1u;
  } else {
    v = static_cast<std::uint32_t>(col - plus_region) << 1;
  }
  return {m, v};
}

/// Whether vectors j and m agree on a segment with step-m pattern v
/// (1 <= j < m; vector 1 is the reference all-plus vector).
inline bool pair_agrees(int m, std::uint32_t v, int j) {
  const bool m_bit = (v & 1u) != 0;
  if (j == 1) return m_bit;
  return (((v >> (m - j)) & 1u) != 0) == m_bit;
}

}  // namespace uogp::detail
