#pragma once

#include <span>
#include <vector>

namespace uogp {

inline constexpr double kLn2 = 0.693147180559945309417232121458;
inline constexpr double kSqrt2 = 1.41421356237309504880168872421;
inline constexpr double kLogSqrt2Pi = 0.918938533204672741780329736406;

/// Value used for log of numbers that underflow to zero. Chosen just below
/// log(DBL_MIN) so exp() of it is exactly 0 while sums of a few such terms
/// stay finite.
inline constexpr double kLogZero = -760.0;

/// Scaled complementary error function e^{x^2} erfc(x) for x >= 0.
/// Direct product below x=12 (no overflow, erfc still normal); asymptotic
/// continued-fraction-free series beyond. Accurate to ~1e-14 relative.
double erfcx(double x);

/// log of the centered Gaussian window probability
///   P(|sigma W + mu| <= kappa),  W ~ N(0,1),
/// stable for |mu| >> kappa (far tail) and sigma -> 0.
double log_gauss_window(double mu, double sigma, double kappa);

/// log of  (erf((d+e)/sqrt2) - erf((d-e)/sqrt2)) / 2  for d = |D| and e > 0,
/// the probability that N(d,1) lies in [-e, e]; cancellation-safe for d >> e.
double log_erf_diff_half(double d, double e);

/// Binary (base-2) scalar entropy h(a) = -(1-a) log2(1-a) - a log2(a),
/// with the 0 log 0 := 0 convention. Throws OutOfRange outside [0,1].
double scalar_entropy(double a);

/// Base-2 vector entropy h_v(a) = -sum a_i log2 a_i of a probability vector.
/// Throws NotNormalized if the entries do not sum to 1 within tolerance or
/// any entry is negative beyond tolerance.
double vector_entropy(std::span<const double> a);

/// log(sum_i exp(v_i)) with max-shift; returns kLogZero for an empty span or
/// all-(-inf) content.
double log_sum_exp(std::span<const double> v);

}  // namespace uogp
