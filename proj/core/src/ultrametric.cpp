#include "uogp/ultrametric.hpp"

#include <cmath>

#include <fmt/format.h>

namespace uogp {

int level_of_pair(const UltrametricSpec& spec, int i, int j) {
  const int n = spec.k.total();
  if (i < 1 || i > n || j < 1 || j > n) {
    raise(ErrorCode::IndexOutOfRange,
          fmt::format("pair ({}, {}) outside 1..{}", i, j, n));
  }
  for (int l = 0; l <= spec.s; ++l) {
    const int kl = spec.k.k[l];
    if ((i - 1) / kl == (j - 1) / kl) return l;
  }
  // Unreachable: at l = s every index lands in the single top cluster.
  raise(ErrorCode::IndexOutOfRange, "pair level lookup failed");
}

Eigen::MatrixXd build_overlap_matrix(const UltrametricSpec& spec) {
  const int n = spec.k.total();
  Eigen::MatrixXd Q(n, n);
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      Q(i - 1, j - 1) = spec.q.q[level_of_pair(spec, i, j)];
    }
  }
  return Q;
}

double CovarianceCoeffs::beta(int i) const {
  return std::sqrt(-c[static_cast<std::size_t>(i)]) / std::sqrt(c[0]);
}

double CovarianceCoeffs::scaled_margin(double kappa) const {
  return std::sqrt(c[0]) * kappa;
}

CovarianceCoeffs covariance_coefficients(const UltrametricSpec& spec) {
  const auto& k = spec.k.k;
  const auto& q = spec.q.q;
  const int s = spec.s;

  CovarianceCoeffs out;
  out.c.resize(static_cast<std::size_t>(s) + 1);

  const double g0 = 1.0 - q[1];
  if (!(g0 > 0.0)) {
    raise(ErrorCode::SingularGap,
          fmt::format("top overlap gap 1 - q_1 = {} is not positive", g0));
  }
  out.c[0] = 1.0 / g0;

  // S accumulates sum_{j<=i} k_{j-1} c[j-1]; it stays strictly positive
  // because each step rescales S by 1 / (1 + gap * k_i * S).
  double S = out.c[0];
  for (int i = 1; i <= s; ++i) {
    const double gap = q[i] - q[i + 1];
    if (!(gap > 0.0)) {
      raise(ErrorCode::SingularGap,
            fmt::format("overlap gap q_{} - q_{} = {} is not positive", i,
                        i + 1, gap));
    }
    const double denom = 1.0 / gap + k[i] * S;
    const double ci = -(S * S) / denom;
    if (!std::isfinite(ci)) {
      raise(ErrorCode::SingularGap,
            fmt::format("coefficient {} is not finite (gap {:.3e})", i, gap));
    }
    out.c[static_cast<std::size_t>(i)] = ci;
    S += k[i] * ci;
  }
  return out;
}

}  // namespace uogp
