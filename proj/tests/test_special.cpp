#include <cmath>
#include <vector>

#include <doctest.h>

#include "uogp/errors.hpp"
#include "uogp/special.hpp"

using namespace uogp;

namespace {

// Reference values computed with an independent arbitrary-precision
// evaluation of e^{x^2} erfc(x); they straddle the internal series switch.
struct ErfcxRef {
  double x;
  double value;
};
const std::vector<ErfcxRef> kErfcxRefs = {
    {0.0, 1.0},
    {0.1, 0.8964569799691268},
    {0.5, 0.6156903441929258},
    {1.0, 0.427583576155807},
    {2.0, 0.2553956763105058},
    {5.0, 0.1107046377330686},
    {11.9, 0.04724523248408766},
    {12.0, 0.04685422101489376},
    {15.0, 0.03752960638850577},
    {26.0, 0.02168358485056291},
    {50.0, 0.01128153626532377},
    {1000.0, 0.0005641893014533876},
    {1e7, 5.641895835477534e-08},
};

}  // namespace

TEST_CASE("scaled complementary error function matches references") {
  for (const auto& ref : kErfcxRefs) {
    CAPTURE(ref.x);
    CHECK(erfcx(ref.x) == doctest::Approx(ref.value).epsilon(1e-13));
  }
  // Mildly negative arguments via the reflection 2 e^{x^2} - erfcx(-x).
  CHECK(erfcx(-0.5) ==
        doctest::Approx(2.0 * std::exp(0.25) - 0.6156903441929258)
            .epsilon(1e-13));
}

TEST_CASE("gaussian window log-probability") {
  SUBCASE("centered window is a plain erf") {
    CHECK(log_gauss_window(0.0, 1.0, 1.0) ==
          doctest::Approx(std::log(std::erf(1.0 / kSqrt2))).epsilon(1e-14));
    CHECK(log_gauss_window(0.0, 2.0, 1.0) ==
          doctest::Approx(std::log(std::erf(0.5 / kSqrt2))).epsilon(1e-14));
  }
  SUBCASE("even in the mean shift") {
    for (double mu : {0.3, 1.7, 5.0, 42.0}) {
      CHECK(log_gauss_window(mu, 1.0, 1.0) ==
            doctest::Approx(log_gauss_window(-mu, 1.0, 1.0)).epsilon(1e-15));
    }
  }
  SUBCASE("moderate shift agrees with direct erf difference") {
    const double direct =
        0.5 * (std::erf((1.0 - 0.8) / kSqrt2) + std::erf((1.0 + 0.8) / kSqrt2));
    CHECK(log_gauss_window(0.8, 1.0, 1.0) ==
          doctest::Approx(std::log(direct)).epsilon(1e-14));
  }
  SUBCASE("continuous across the near/far branch switch") {
    const double below = log_erf_diff_half(2.0 - 1e-9, 2.0);
    const double above = log_erf_diff_half(2.0 + 1e-9, 2.0);
    CHECK(std::abs(below - above) < 1e-7);
  }
  SUBCASE("deep tail stays finite and ordered") {
    const double a = log_gauss_window(30.0, 1.0, 1.0);
    const double b = log_gauss_window(31.0, 1.0, 1.0);
    CHECK(std::isfinite(a));
    CHECK(a < -400.0);
    CHECK(b < a);
  }
  SUBCASE("tiny window reduces to density times width") {
    const double e = 1e-12;
    const double d = 1.5;
    const double expected = std::log(2.0 * e) - kLogSqrt2Pi - 0.5 * d * d;
    CHECK(log_erf_diff_half(d, e) == doctest::Approx(expected).epsilon(1e-12));
  }
  SUBCASE("rejects non-positive sigma") {
    CHECK_THROWS_AS(log_gauss_window(0.0, 0.0, 1.0), Error);
  }
}

TEST_CASE("scalar entropy") {
  CHECK(scalar_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(scalar_entropy(0.0) == 0.0);
  CHECK(scalar_entropy(1.0) == 0.0);
  CHECK(scalar_entropy(0.98445) ==
        doctest::Approx(0.115666515087022).epsilon(1e-12));
  CHECK(scalar_entropy(0.25) == doctest::Approx(scalar_entropy(0.75)));
  CHECK_THROWS_AS(scalar_entropy(-0.1), Error);
  CHECK_THROWS_AS(scalar_entropy(1.1), Error);
  try {
    scalar_entropy(2.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutOfRange);
  }
}

TEST_CASE("vector entropy") {
  const std::vector<double> v{0.5, 0.25, 0.25};
  CHECK(vector_entropy(v) == doctest::Approx(1.5).epsilon(1e-15));
  const std::vector<double> uniform(8, 0.125);
  CHECK(vector_entropy(uniform) == doctest::Approx(3.0).epsilon(1e-14));
  const std::vector<double> with_zero{1.0, 0.0, 0.0};
  CHECK(vector_entropy(with_zero) == doctest::Approx(0.0));

  const std::vector<double> bad_sum{0.5, 0.25};
  CHECK_THROWS_AS(vector_entropy(bad_sum), Error);
  const std::vector<double> negative{1.5, -0.5};
  CHECK_THROWS_AS(vector_entropy(negative), Error);
  try {
    vector_entropy(bad_sum);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotNormalized);
  }
}

TEST_CASE("log-sum-exp") {
  const std::vector<double> v{std::log(1.0), std::log(2.0), std::log(3.0)};
  CHECK(log_sum_exp(v) == doctest::Approx(std::log(6.0)).epsilon(1e-14));
  const std::vector<double> shifted{-1000.0, -1000.0};
  CHECK(log_sum_exp(shifted) ==
        doctest::Approx(-1000.0 + std::log(2.0)).epsilon(1e-14));
  const std::vector<double> empty;
  CHECK(log_sum_exp(empty) == kLogZero);
  CHECK(std::exp(kLogZero) == 0.0);
}
