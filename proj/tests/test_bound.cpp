#include <cmath>
#include <functional>
#include <vector>

#include <doctest.h>

#include "uogp/bound.hpp"
#include "uogp/combfactor.hpp"
#include "uogp/special.hpp"

using namespace uogp;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("single-vector capacity bound") {
  // References computed from the closed-form window probability.
  CHECK(capacity_union_bound(0.5) ==
        doctest::Approx(0.722091245069).epsilon(1e-10));
  CHECK(capacity_union_bound(1.0) ==
        doctest::Approx(1.81587549584).epsilon(1e-10));
  CHECK(capacity_union_bound(2.0) ==
        doctest::Approx(14.8846522517).epsilon(1e-10));
  // Wide margins admit almost every vector, so the bound blows up.
  CHECK(capacity_union_bound(8.0) > 5e14);
  CHECK(code_of([] { capacity_union_bound(0.0); }) ==
        ErrorCode::NonPositiveKappa);
  CHECK(code_of([] { capacity_union_bound(-1.0); }) ==
        ErrorCode::NonPositiveKappa);
}

TEST_CASE("bound assembles its factors exactly") {
  const auto spec = make_spec({1, 4}, {0.984}, 1.0);
  const BoundResult r = alpha_bar(spec);
  CHECK(r.h == doctest::Approx(tuple_entropy(spec)).epsilon(1e-12));
  CHECK(r.p == doctest::Approx(std::exp(r.log_p)).epsilon(1e-12));
  CHECK(r.alpha_bar ==
        doctest::Approx(-r.h * kLn2 / r.log_p).epsilon(1e-14));
  CHECK(r.mode == OverlapMode::level_consistent);
  // Twelve-digit factor references pin the composition end to end.
  CHECK(r.h == doctest::Approx(1.152858287877).epsilon(5e-9));
  CHECK(r.log_p == doctest::Approx(-0.482022646882).epsilon(5e-9));
  CHECK(r.alpha_bar == doctest::Approx(1.6578).epsilon(3e-4));
}

TEST_CASE("tighter structures give tighter bounds at their best points") {
  // Evaluated at each structure's own optimal overlaps; the chain of
  // improvements (pairs -> triples -> quadruples) and the reversal at
  // quintuples are stable features.
  const double a2 = alpha_bar(make_spec({1, 2}, {0.9689}, 1.0)).alpha_bar;
  const double a3 = alpha_bar(make_spec({1, 3}, {0.978}, 1.0)).alpha_bar;
  const double a4 = alpha_bar(make_spec({1, 4}, {0.984}, 1.0)).alpha_bar;
  const double a5 = alpha_bar(make_spec({1, 5}, {0.9881}, 1.0)).alpha_bar;
  CHECK(a4 < a3);
  CHECK(a3 < a2);
  CHECK(a5 > a4);
  CHECK(a2 == doctest::Approx(1.7001).epsilon(3e-4));
  CHECK(a3 == doctest::Approx(1.6664).epsilon(3e-4));
  CHECK(a4 == doctest::Approx(1.6578).epsilon(3e-4));
  CHECK(a5 == doctest::Approx(1.6593).epsilon(3e-4));
}

TEST_CASE("deeper hierarchies dominate shallower ones") {
  const double depth1 = alpha_bar(make_spec({1, 4}, {0.984}, 1.0)).alpha_bar;
  const double depth2 =
      alpha_bar(make_spec({1, 4, 12}, {0.9989, 0.9745}, 1.0)).alpha_bar;
  CHECK(depth2 < depth1);
  CHECK(depth1 < capacity_union_bound(1.0));
  CHECK(depth2 == doctest::Approx(1.6219).epsilon(3e-4));
}

TEST_CASE("threshold indicator flips exactly at the bound") {
  const auto spec = make_spec({1, 3}, {0.95}, 1.0);
  const double a = alpha_bar(spec).alpha_bar;
  const double eps = 1e-6 * a;
  CHECK(ogp_indicator(spec, a + eps));
  CHECK_FALSE(ogp_indicator(spec, a - eps));
  CHECK_FALSE(ogp_indicator(spec, a));  // strict inequality at the boundary
}

TEST_CASE("overlap schemes coincide whenever the first ratio is 2") {
  const auto spec = make_spec({1, 2, 6}, {0.9976, 0.976}, 1.0);
  const double lit = alpha_bar(spec, OverlapMode::literal).alpha_bar;
  const double lev = alpha_bar(spec, OverlapMode::level_consistent).alpha_bar;
  CHECK(lit == doctest::Approx(lev).epsilon(1e-12));
}

TEST_CASE("pair-structure search lands on the known optimum") {
  ClusterSequence k;
  k.k = {1, 2};
  const BoundResult r = optimize_q(k, 1.0);
  CHECK(r.alpha_bar == doctest::Approx(1.7001).epsilon(5e-4 / 1.7001));
  CHECK(std::abs(r.spec.q.q[1] - 0.9689) < 0.003);
  CHECK(r.spec.k.k == std::vector<int>{1, 2});
}

TEST_CASE("coordinate refinement also converges") {
  ClusterSequence k;
  k.k = {1, 3};
  SearchConfig search;
  search.refinement = Refinement::coordinate;
  search.max_evaluations = 120;
  const BoundResult r = optimize_q(k, 1.0, search);
  CHECK(r.alpha_bar == doctest::Approx(1.6664).epsilon(1e-3));
}

TEST_CASE("search input validation") {
  ClusterSequence bad;
  bad.k = {2, 4};
  CHECK(code_of([&] { optimize_q(bad, 1.0); }) == ErrorCode::InvalidArgument);
  ClusterSequence nondiv;
  nondiv.k = {1, 2, 5};
  CHECK(code_of([&] { optimize_q(nondiv, 1.0); }) == ErrorCode::NonDivisibleK);
  ClusterSequence ok;
  ok.k = {1, 2};
  CHECK(code_of([&] { optimize_q(ok, -1.0); }) == ErrorCode::NonPositiveKappa);
  SearchConfig coarse;
  coarse.resolution = 2;
  CHECK(code_of([&] { optimize_q(ok, 1.0, coarse); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("an all-underflow scan reports no feasible point") {
  // At margins this small every 12-tuple window probability underflows, so
  // every grid point is rejected and the search must say so.
  ClusterSequence k;
  k.k = {1, 12};
  SearchConfig search;
  search.resolution = 5;
  search.refinement = Refinement::none;
  CHECK(code_of([&] { optimize_q(k, 1e-40, search); }) ==
        ErrorCode::NoFeasiblePoint);
}
