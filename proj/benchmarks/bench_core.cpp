// Hot-path timings: scalar kernels, quadrature rules, the window
// probability at each depth, the entropy program at the larger tuple
// sizes, and one full bound evaluation.

#include <benchmark/benchmark.h>

#include "uogp/bound.hpp"
#include "uogp/combfactor.hpp"
#include "uogp/probfactor.hpp"
#include "uogp/quadrature.hpp"
#include "uogp/special.hpp"
#include "uogp/types.hpp"
#include "uogp/ultrametric.hpp"

namespace {

using namespace uogp;

void BM_Erfcx(benchmark::State& state) {
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(erfcx(x));
    x = x < 30.0 ? x + 1e-3 : 0.0;
  }
}
BENCHMARK(BM_Erfcx);

void BM_LogGaussWindow(benchmark::State& state) {
  double mu = -40.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(log_gauss_window(mu, 0.37, 1.0));
    mu = mu < 40.0 ? mu + 1e-3 : -40.0;
  }
}
BENCHMARK(BM_LogGaussWindow);

void BM_LogInnerKernel(benchmark::State& state) {
  double d = -25.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(log_inner_kernel(d, 4.2));
    d = d < 25.0 ? d + 1e-3 : -25.0;
  }
}
BENCHMARK(BM_LogInnerKernel);

void BM_GaussHermiteRule(benchmark::State& state) {
  // Applies a cached rule to a smooth integrand (construction is amortized).
  const GaussRule& rule = gauss_hermite(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i)
      acc += rule.w[i] * std::cos(rule.x[i]);
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_GaussHermiteRule)->Arg(64)->Arg(128);

void BM_NestedProb(benchmark::State& state) {
  static const std::vector<UltrametricSpec> specs = {
      make_spec({1, 4}, {0.9840}, 1.0),
      make_spec({1, 4, 12}, {0.9989, 0.9745}, 1.0),
      make_spec({1, 3, 6, 12}, {0.9992, 0.9920, 0.9580}, 1.0),
  };
  const UltrametricSpec& spec = specs[static_cast<std::size_t>(state.range(0)) - 1];
  for (auto _ : state)
    benchmark::DoNotOptimize(nested_prob(spec).log_p);
}
BENCHMARK(BM_NestedProb)->DenseRange(1, 3)->Unit(benchmark::kMicrosecond);

void BM_TupleEntropy(benchmark::State& state) {
  static const std::vector<UltrametricSpec> specs = {
      make_spec({1, 2, 8}, {0.9989, 0.9830}, 1.0),
      make_spec({1, 4, 12}, {0.9989, 0.9745}, 1.0),
  };
  const UltrametricSpec& spec =
      specs[static_cast<std::size_t>(state.range(0))];
  for (auto _ : state)
    benchmark::DoNotOptimize(tuple_entropy(spec));
}
BENCHMARK(BM_TupleEntropy)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_AlphaBar(benchmark::State& state) {
  const UltrametricSpec spec = make_spec({1, 2, 4}, {0.9932, 0.9640}, 1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(alpha_bar(spec).alpha_bar);
}
BENCHMARK(BM_AlphaBar)->Unit(benchmark::kMillisecond);

void BM_McOrthant(benchmark::State& state) {
  const UltrametricSpec spec = make_spec({1, 2, 4}, {0.9932, 0.9640}, 1.0);
  const Eigen::MatrixXd Q = build_overlap_matrix(spec);
  for (auto _ : state)
    benchmark::DoNotOptimize(mc_orthant_prob(Q, 1.0, 10000, 777).p_hat);
}
BENCHMARK(BM_McOrthant)->Unit(benchmark::kMillisecond);

void BM_BuildA(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(build_A(k).A.nonZeros());
}
BENCHMARK(BM_BuildA)->Arg(6)->Arg(10)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
