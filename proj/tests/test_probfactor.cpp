#include <cmath>
#include <vector>

#include <doctest.h>
#include <Eigen/Dense>

#include "uogp/probfactor.hpp"
#include "uogp/special.hpp"
#include "uogp/types.hpp"
#include "uogp/ultrametric.hpp"

using namespace uogp;

namespace {

struct LogPRef {
  std::vector<int> k;
  std::vector<double> q;
  double kappa;
  double log_p;
};

// Frozen from independent nested adaptive Gaussian quadrature (absolute
// tolerance 1e-11); these sit at the optimum of each depth's best cluster
// shape.
const std::vector<LogPRef> kLogPRefs = {
    {{1, 2}, {0.9689}, 1.0, -0.454855133506},
    {{1, 3}, {0.978}, 1.0, -0.477282876592},
    {{1, 4}, {0.984}, 1.0, -0.482022646882},
    {{1, 7}, {0.993}, 1.0, -0.468612335230},
    {{1, 2, 4}, {0.9932, 0.964}, 1.0, -0.498264093548},
    {{1, 4, 12}, {0.9989, 0.9745}, 1.0, -0.515094139367},
    {{1, 3, 6, 12}, {0.9992, 0.992, 0.958}, 1.0, -0.530141122083},
};

}  // namespace

TEST_CASE("inner kernel agrees with the 1-D quadrature reference") {
  const auto spec = make_spec({1, 3}, {0.978}, 1.0);
  const auto coeffs = covariance_coefficients(spec);
  // Reference from integrating e^{-c0 g^2/2 + sqrt(-c1) g z} over |g| <= 1.
  CHECK(inner_kernel({0.5}, coeffs, 1.0) ==
        doctest::Approx(1.04222365755664).epsilon(1e-12));

  SUBCASE("zero shift collapses to the erf of the scaled margin") {
    const double expected = std::erf(coeffs.scaled_margin(1.0) / kSqrt2);
    CHECK(inner_kernel({0.0}, coeffs, 1.0) ==
          doctest::Approx(expected).epsilon(1e-13));
  }
  SUBCASE("strictly increasing in the margin until erf saturation") {
    double prev = 0.0;
    for (double kap : {0.05, 0.1, 0.15, 0.2, 0.3, 0.5, 1.0}) {
      const double v = inner_kernel({0.5}, coeffs, kap);
      CHECK(v > prev);
      prev = v;
    }
  }
  SUBCASE("log form stays finite where the linear form overflows") {
    const double big = log_inner_kernel(50.0, 30.0);
    CHECK(std::isfinite(big));
    CHECK(big == doctest::Approx(0.5 * 50.0 * 50.0 +
                                 log_erf_diff_half(50.0, 30.0)));
  }
  SUBCASE("shift size is checked") {
    CHECK_THROWS_AS(inner_kernel({0.5, 0.5}, coeffs, 1.0), Error);
  }
}

TEST_CASE("overlap determinant closed form matches dense linear algebra") {
  for (const auto& ref : kLogPRefs) {
    const auto spec = make_spec(ref.k, ref.q, ref.kappa);
    const Eigen::MatrixXd Q = build_overlap_matrix(spec);
    const double dense = std::log(Q.determinant());
    CHECK(log_det_overlap(spec) == doctest::Approx(dense).epsilon(1e-9));
  }
}

TEST_CASE("nested probability reproduces frozen references") {
  QuadratureConfig cfg;
  for (const auto& ref : kLogPRefs) {
    const auto spec = make_spec(ref.k, ref.q, ref.kappa);
    CAPTURE(ref.k.back());
    CAPTURE(ref.q[0]);
    const auto pf = nested_prob(spec, cfg);
    CHECK(pf.log_p == doctest::Approx(ref.log_p).epsilon(5e-9));
    CHECK(std::abs(std::log(pf.p) - pf.log_p) <= 1e-12 * std::abs(pf.log_p));
    CHECK(pf.p > 0.0);
    CHECK(pf.p < 1.0);
  }
}

TEST_CASE("tensor and cascade evaluations agree away from extreme overlaps") {
  QuadratureConfig gh;
  gh.mode = QuadratureConfig::Mode::gauss_hermite;
  QuadratureConfig ad;

  const std::vector<LogPRef> moderate = {
      {{1, 3}, {0.6}, 1.0, 0.0},
      {{1, 2}, {0.9}, 0.5, 0.0},
      {{1, 2, 4}, {0.9, 0.7}, 1.0, 0.0},
      {{1, 2, 4, 8}, {0.9, 0.7, 0.4}, 2.0, 0.0},
  };
  for (const auto& m : moderate) {
    const auto spec = make_spec(m.k, m.q, m.kappa);
    CAPTURE(m.k.back());
    const double a = nested_prob(spec, gh).log_p;
    const double b = nested_prob(spec, ad).log_p;
    CHECK(a == doctest::Approx(b).epsilon(1e-8));
  }
}

TEST_CASE("window probability bounds and limits") {
  SUBCASE("single vector is the plain margin probability") {
    const auto spec = make_spec({1}, {}, 1.0);
    const auto pf = nested_prob(spec);
    CHECK(pf.p == doctest::Approx(0.682689492137086).epsilon(1e-12));
  }
  SUBCASE("vanishing overlap factorizes") {
    const auto spec = make_spec({1, 2}, {1e-5}, 1.0);
    const auto pf = nested_prob(spec);
    const double indep = std::pow(std::erf(1.0 / kSqrt2), 2);
    CHECK(pf.p == doctest::Approx(indep).epsilon(1e-4));
  }
  SUBCASE("p is bracketed by the perfectly correlated and independent cases") {
    for (const auto& ref : kLogPRefs) {
      const auto spec = make_spec(ref.k, ref.q, ref.kappa);
      const auto pf = nested_prob(spec);
      const double single = std::erf(ref.kappa / kSqrt2);
      CHECK(pf.p <= single + 1e-12);
      CHECK(pf.p >= std::pow(single, spec.k.total()) - 1e-12);
    }
  }
  SUBCASE("p increases with the margin") {
    const auto base = make_spec({1, 2, 4}, {0.9, 0.7}, 1.0);
    double prev = 0.0;
    for (int i = 1; i <= 10; ++i) {
      auto spec = base;
      spec.kappa = 0.3 * i;
      const auto pf = nested_prob(spec);
      CHECK(pf.p > prev);
      prev = pf.p;
    }
  }
  SUBCASE("underflow raises the dedicated error") {
    const auto spec = make_spec({1, 2}, {0.5}, 1e-170);
    CHECK_THROWS_AS(nested_prob(spec), Error);
    try {
      nested_prob(spec);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::QuadratureUnderflow);
    }
  }
}

TEST_CASE("monte carlo window probability") {
  SUBCASE("identity covariance matches the independent product") {
    const Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(2, 2);
    const auto est = mc_orthant_prob(Q, 1.0, 200000, 42);
    const double expected = std::pow(std::erf(1.0 / kSqrt2), 2);
    CHECK(std::abs(est.p_hat - expected) <= 4.0 * est.std_error);
  }
  SUBCASE("fully correlated pair collapses to one coordinate") {
    Eigen::MatrixXd Q(2, 2);
    Q << 1.0, 1.0, 1.0, 1.0;
    const auto est = mc_orthant_prob(Q, 1.0, 200000, 7);
    CHECK(std::abs(est.p_hat - std::erf(1.0 / kSqrt2)) <=
          4.0 * est.std_error);
  }
  SUBCASE("deterministic per seed") {
    const Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(3, 3);
    const auto a = mc_orthant_prob(Q, 1.0, 100000, 123);
    const auto b = mc_orthant_prob(Q, 1.0, 100000, 123);
    const auto c = mc_orthant_prob(Q, 1.0, 100000, 124);
    CHECK(a.hits == b.hits);
    CHECK(a.hits != c.hits);
  }
  SUBCASE("agrees with nested quadrature at reference points") {
    const auto spec = make_spec({1, 2}, {0.9}, 0.5);
    const auto pf = nested_prob(spec);
    CHECK(pf.p == doctest::Approx(0.258107385308).epsilon(1e-8));
    const auto est =
        mc_orthant_prob(build_overlap_matrix(spec), 0.5, 200000, 777);
    CHECK(std::abs(est.p_hat - pf.p) <= 4.0 * est.std_error);

    const auto deep = make_spec({1, 2, 4}, {0.9932, 0.964}, 1.0);
    const auto pf2 = nested_prob(deep);
    const auto est2 =
        mc_orthant_prob(build_overlap_matrix(deep), 1.0, 200000, 778);
    CHECK(std::abs(est2.p_hat - pf2.p) <= 4.0 * est2.std_error);
  }
  SUBCASE("rejects indefinite covariance") {
    Eigen::MatrixXd Q(2, 2);
    Q << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS_AS(mc_orthant_prob(Q, 1.0, 1000, 1), Error);
  }
  SUBCASE("rejects asymmetric covariance") {
    Eigen::MatrixXd Q(2, 2);
    Q << 1.0, 0.5, 0.2, 1.0;
    CHECK_THROWS_AS(mc_orthant_prob(Q, 1.0, 1000, 1), Error);
  }
}
