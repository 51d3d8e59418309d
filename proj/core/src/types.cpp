#include "uogp/types.hpp"

#include <cmath>

#include <fmt/format.h>

namespace uogp {

const UltrametricSpec& validate_spec(const UltrametricSpec& spec) {
  const auto& k = spec.k.k;
  const auto& q = spec.q.q;

  if (spec.s < 0) {
    raise(ErrorCode::IndexOutOfRange, "level count must be non-negative");
  }
  if (static_cast<int>(k.size()) != spec.s + 1) {
    raise(ErrorCode::IndexOutOfRange,
          fmt::format("cluster sequence has {} entries, expected s+1 = {}",
                      k.size(), spec.s + 1));
  }
  if (static_cast<int>(q.size()) != spec.s + 2) {
    raise(ErrorCode::IndexOutOfRange,
          fmt::format("overlap sequence has {} entries, expected s+2 = {}",
                      q.size(), spec.s + 2));
  }
  if (k.front() != 1) {
    raise(ErrorCode::NonDivisibleK, "cluster sequence must start at 1");
  }
  for (int i = 1; i <= spec.s; ++i) {
    if (k[i] <= k[i - 1]) {
      raise(ErrorCode::NonDivisibleK,
            fmt::format("cluster sizes must increase strictly: k[{}]={} after "
                        "k[{}]={}",
                        i, k[i], i - 1, k[i - 1]));
    }
    if (k[i] % k[i - 1] != 0) {
      raise(ErrorCode::NonDivisibleK,
            fmt::format("k[{}]={} is not a multiple of k[{}]={}", i, k[i],
                        i - 1, k[i - 1]));
    }
  }
  if (q.front() != 1.0) {
    raise(ErrorCode::NonDecreasingQ, "overlap sequence must start at 1");
  }
  if (q.back() != 0.0) {
    raise(ErrorCode::NonDecreasingQ, "overlap sequence must end at 0");
  }
  for (int i = 0; i <= spec.s; ++i) {
    if (!(q[i] > q[i + 1])) {
      raise(ErrorCode::NonDecreasingQ,
            fmt::format("overlaps must decrease strictly: q[{}]={} then "
                        "q[{}]={}",
                        i, q[i], i + 1, q[i + 1]));
    }
    if (q[i] - q[i + 1] < kEpsQ) {
      raise(ErrorCode::QGapBelowEpsilon,
            fmt::format("gap q[{}]-q[{}] = {:.3e} is below the minimum {:.0e}",
                        i, i + 1, q[i] - q[i + 1], kEpsQ));
    }
  }
  for (double v : q) {
    if (!std::isfinite(v)) {
      raise(ErrorCode::NonDecreasingQ, "overlap values must be finite");
    }
  }
  if (!(spec.kappa > 0.0) || !std::isfinite(spec.kappa)) {
    raise(ErrorCode::NonPositiveKappa,
          fmt::format("margin must be positive and finite, got {}",
                      spec.kappa));
  }
  return spec;
}

UltrametricSpec make_spec(std::vector<int> k, std::vector<double> q_inner,
                          double kappa) {
  UltrametricSpec spec;
  spec.s = static_cast<int>(k.size()) - 1;
  spec.k.k = std::move(k);
  spec.q.q.reserve(q_inner.size() + 2);
  spec.q.q.push_back(1.0);
  for (double v : q_inner) spec.q.q.push_back(v);
  spec.q.q.push_back(0.0);
  spec.kappa = kappa;
  validate_spec(spec);
  return spec;
}

}  // namespace uogp
