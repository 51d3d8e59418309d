#include "uogp/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "uogp/errors.hpp"

namespace uogp {

namespace {

constexpr double kInvSqrtPi = 0.564189583547756286948079451561;

/// Asymptotic tail of erfcx: 1/(x sqrt(pi)) * sum (-1)^n (2n-1)!! / (2x^2)^n.
/// Converges to full double precision for x >= 12 within ~12 terms.
double erfcx_asymptotic(double x) {
  const double inv2x2 = 1.0 / (2.0 * x * x);
  double term = 1.0;
  double sum = 1.0;
  for (int n = 1; n <= 16; ++n) {
    term *= -static_cast<double>(2 * n - 1) * inv2x2;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return kInvSqrtPi / x * sum;
}

}  // namespace

double erfcx(double x) {
  if (x < 0.0) {
    // Only mildly negative arguments are meaningful (2 e^{x^2} dominates).
    return 2.0 * std::exp(x * x) - erfcx(-x);
  }
  if (x < 12.0) return std::exp(x * x) * std::erfc(x);
  return erfcx_asymptotic(x);
}

double log_erf_diff_half(double d, double e) {
  // log of P(N(d,1) in [-e, e]) = (erf((e-d)/sqrt2) + erf((e+d)/sqrt2)) / 2.
  d = std::abs(d);
  if (e <= 0.0) return kLogZero;
  if (e < 1e-8) {
    // Window narrower than any density feature: P = 2e * phi(d) to O(e^2),
    // which the erf/erfcx differences below would lose to cancellation.
    return std::log(2.0 * e) - kLogSqrt2Pi - 0.5 * d * d;
  }
  if (d < e) {
    // Both erf terms positive: no cancellation, no overflow.
    const double v =
        0.5 * (std::erf((e - d) / kSqrt2) + std::erf((e + d) / kSqrt2));
    return std::log(v);
  }
  // Far side of the window: express through scaled complements so the
  // exponentially small difference is formed without cancellation:
  //   P = 0.5 [ erfc((d-e)/sqrt2) - erfc((d+e)/sqrt2) ]
  //     = 0.5 e^{-(d-e)^2/2} [ erfcx((d-e)/sqrt2) - e^{-2de} erfcx((d+e)/sqrt2) ].
  const double a = (d - e) / kSqrt2;
  const double b = (d + e) / kSqrt2;
  const double cross = std::exp(-2.0 * d * e);
  const double bracket = 0.5 * (erfcx(a) - cross * erfcx(b));
  if (bracket <= 0.0) return kLogZero;
  return -a * a + std::log(bracket);
}

double log_gauss_window(double mu, double sigma, double kappa) {
  if (sigma <= 0.0) raise(ErrorCode::InvalidArgument, "sigma must be positive");
  return log_erf_diff_half(mu / sigma, kappa / sigma);
}

double scalar_entropy(double a) {
  if (a < 0.0 || a > 1.0)
    raise(ErrorCode::OutOfRange, "entropy argument outside [0,1]");
  if (a <= 0.0 || a >= 1.0) return 0.0;
  return -(1.0 - a) * std::log2(1.0 - a) - a * std::log2(a);
}

double vector_entropy(std::span<const double> a) {
  double sum = 0.0;
  double h = 0.0;
  for (double v : a) {
    if (v < -1e-12)
      raise(ErrorCode::NotNormalized, "negative probability entry");
    sum += v;
    if (v > 0.0) h -= v * std::log2(v);
  }
  if (std::abs(sum - 1.0) > 1e-9)
    raise(ErrorCode::NotNormalized, "probability vector does not sum to 1");
  return h;
}

double log_sum_exp(std::span<const double> v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  if (!std::isfinite(m)) return kLogZero;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonDecreasingQ: return "NonDecreasingQ";
    case ErrorCode::QGapBelowEpsilon: return "QGapBelowEpsilon";
    case ErrorCode::NonDivisibleK: return "NonDivisibleK";
    case ErrorCode::NonPositiveKappa: return "NonPositiveKappa";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::TargetsNotIntegral: return "TargetsNotIntegral";
    case ErrorCode::SizeLimit: return "SizeLimit";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ZeroRatio: return "ZeroRatio";
    case ErrorCode::UnknownTable: return "UnknownTable";
    case ErrorCode::SingularGap: return "SingularGap";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::InfeasibleTriple: return "InfeasibleTriple";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::QuadratureUnderflow: return "QuadratureUnderflow";
    case ErrorCode::NoFeasiblePoint: return "NoFeasiblePoint";
    case ErrorCode::NoFixture: return "NoFixture";
    case ErrorCode::FixtureMismatch: return "FixtureMismatch";
  }
  return "UnknownError";
}

}  // namespace uogp
