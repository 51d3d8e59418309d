#include "uogp/combfactor.hpp"

#include <cmath>
#include <ostream>
#include <vector>

#include <fmt/format.h>

#include "combfactor_layout.hpp"
#include "uogp/special.hpp"
#include "uogp/ultrametric.hpp"

namespace uogp {
namespace {

constexpr int kDefaultKMax = 12;

/// Level sign-overlap target (1 + q_level(i,j)) / 2 for a pair of vectors.
double pair_target(const UltrametricSpec& spec, int i, int j) {
  return 0.5 * (1.0 + spec.q.q[level_of_pair(spec, i, j)]);
}

/// Fills the constraint rows of the step-k system in printed order. When
/// `spec` is non-null also fills the matching right-hand side. Row layout per
/// step m (newest first): m-1 pairwise-overlap rows, then the splitting rows
/// by parent pattern descending; the step-4 base closes with its three
/// block-length rows.
void assemble(int k, const UltrametricSpec* spec, OverlapMode mode,
              std::vector<Eigen::Triplet<double>>* trips,
              std::vector<double>* rhs) {
  OverlapParams params;
  if (spec != nullptr) params = overlap_params(*spec, mode);

  const auto push = [&](std::int64_t row, std::int64_t col, double value) {
    if (trips != nullptr)
      trips->emplace_back(static_cast<int>(row), static_cast<int>(col), value);
  };
  const auto push_rhs = [&](double value) {
    if (rhs != nullptr) rhs->push_back(value);
  };

  std::int64_t row = 0;
  for (int m = k; m >= 5; --m) {
    const std::uint32_t n_patterns = 1u << (m - 1);
    const std::uint32_t slack = n_patterns - 2;
    for (int j = 1; j <= m - 1; ++j, ++row) {
      for (std::uint32_t v = 0; v < n_patterns; ++v) {
        if (v == slack || !detail::pair_agrees(m, v, j)) continue;
        push(row, detail::col_of_pattern(k, m, v), 1.0);
      }
      push_rhs(spec != nullptr ? pair_target(*spec, j, m) : 0.0);
    }
    const std::uint32_t slack_parent = (1u << (m - 2)) - 2;
    for (std::uint32_t p = slack_parent + 1; p-- > 0; ++row) {
      push(row, detail::col_of_pattern(k, m, (p << 1) | 1u), 1.0);
      push(row, detail::col_of_pattern(k, m, p << 1), 1.0);
      if (p == slack_parent) {
        // The parent here is the previous step's slack segment, whose length
        // is the all-agree segment two steps up minus the all-agree segment
        // one step up (at the base, the former is the constant q_s2).
        push(row, detail::col_of_pattern(k, m - 1, (1u << (m - 2)) - 1), 1.0);
        if (m == 5) {
          push_rhs(params.q_s2);
        } else {
          push(row, detail::col_of_pattern(k, m - 2, (1u << (m - 3)) - 1), -1.0);
          push_rhs(0.0);
        }
      } else {
        push(row, detail::col_of_pattern(k, m - 1, p), -1.0);
        push_rhs(0.0);
      }
    }
  }

  for (int j = 1; j <= 3; ++j, ++row) {
    for (std::uint32_t v = 0; v < 8; ++v) {
      if (v == 6u || !detail::pair_agrees(4, v, j)) continue;
      push(row, detail::col_of_pattern(k, 4, v), 1.0);
    }
    push_rhs(spec != nullptr ? pair_target(*spec, j, 4) : 0.0);
  }
  for (std::uint32_t p = 3; p-- > 0; ++row) {
    push(row, detail::col_of_pattern(k, 4, (p << 1) | 1u), 1.0);
    push(row, detail::col_of_pattern(k, 4, p << 1), 1.0);
    push_rhs(p == 2 ? params.q_s1 - params.q_s2 : 0.5 * (1.0 - params.q_s1));
  }
}

}  // namespace

OverlapParams overlap_params(const UltrametricSpec& spec, OverlapMode mode) {
  validate_spec(spec);
  if (spec.s < 1)
    throw Error(ErrorCode::InvalidArgument,
                "overlap_params requires at least one cluster level");
  OverlapParams params;
  params.q_sx.reserve(spec.s + 1);
  for (int l = 0; l <= spec.s; ++l)
    params.q_sx.push_back(0.5 * (1.0 + spec.q.q[l]));
  params.q_s1 = params.q_sx[1];

  double third_vector_overlap;
  if (spec.k.total() < 3 || mode == OverlapMode::literal) {
    third_vector_overlap = params.q_sx[spec.s >= 2 ? 2 : 1];
  } else {
    third_vector_overlap = pair_target(spec, 1, 3);
  }
  params.q_s2 = third_vector_overlap - 0.5 * (1.0 - params.q_s1);
  if (params.q_s2 < 0.0)
    throw Error(ErrorCode::InfeasibleTriple,
                fmt::format("three-vector block length is negative ({:.6g})",
                            params.q_s2));
  return params;
}

double closed_form_h(double q, int k) {
  if (!(q >= 0.0 && q < 1.0))
    throw Error(ErrorCode::OutOfRange,
                fmt::format("overlap {} outside [0, 1)", q));
  const double q_s1 = 0.5 * (1.0 + q);
  if (k == 2) return 1.0 + scalar_entropy(q_s1);
  if (k == 3) {
    const double q_sx2 = q_s1;
    const double q_s2 = q_sx2 - 0.5 * (1.0 - q_s1);
    return 1.0 + scalar_entropy(q_s1) + q_s1 * scalar_entropy(q_s2 / q_s1) +
           (1.0 - q_s1) * scalar_entropy((q_sx2 - q_s2) / (1.0 - q_s1));
  }
  throw Error(ErrorCode::InvalidArgument,
              fmt::format("closed forms exist for tuple sizes 2 and 3, got {}", k));
}

std::int64_t system_cols(int k) {
  return (std::int64_t{1} << k) - k - 5;
}

std::int64_t system_rows(int k) {
  std::int64_t rows = 6;
  for (int m = 5; m <= k; ++m)
    rows += (m - 1) + (std::int64_t{1} << (m - 2)) - 1;
  return rows;
}

ConstraintSystem build_A(int k) {
  if (k < 4)
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("constraint system requires tuple size >= 4, got {}", k));
  if (k > kDefaultKMax)
    throw Error(ErrorCode::SizeLimit,
                fmt::format("tuple size {} exceeds the supported maximum {}", k,
                            kDefaultKMax));
  ConstraintSystem sys;
  sys.k = k;
  std::vector<Eigen::Triplet<double>> trips;
  assemble(k, nullptr, OverlapMode::level_consistent, &trips, nullptr);
  sys.A.resize(static_cast<int>(system_rows(k)), static_cast<int>(system_cols(k)));
  sys.A.setFromTriplets(trips.begin(), trips.end());
  sys.n_vars = system_cols(k) + 1;
  return sys;
}

Eigen::VectorXd build_b(const UltrametricSpec& spec, OverlapMode mode) {
  validate_spec(spec);
  const int k = spec.k.total();
  if (k < 4)
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("right-hand side requires tuple size >= 4, got {}", k));
  std::vector<double> rhs;
  rhs.reserve(static_cast<std::size_t>(system_rows(k)));
  assemble(k, &spec, mode, nullptr, &rhs);
  return Eigen::Map<const Eigen::VectorXd>(rhs.data(),
                                           static_cast<Eigen::Index>(rhs.size()));
}

ConstraintSystem build_system(const UltrametricSpec& spec, OverlapMode mode) {
  ConstraintSystem sys = build_A(spec.k.total());
  sys.b = build_b(spec, mode);
  return sys;
}

void write_sparse_triplets(const ConstraintSystem& sys, std::ostream& out) {
  out << sys.A.rows() << ' ' << sys.A.cols() << ' ' << sys.A.nonZeros() << '\n';
  for (int outer = 0; outer < sys.A.outerSize(); ++outer) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(sys.A, outer); it; ++it) {
      out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
    }
  }
}

}  // namespace uogp
