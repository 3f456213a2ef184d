#include <benchmark/benchmark.h>

#include "vaxinfer/exact.hpp"
#include "vaxinfer/forecast.hpp"
#include "vaxinfer/gibbs.hpp"
#include "vaxinfer/numerics.hpp"
#include "vaxinfer/trial_data.hpp"

using namespace vaxinfer;

namespace {

void BM_LnGamma(benchmark::State& state) {
  double x = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(numerics::ln_gamma(x));
    x += 1.0;
    if (x > 2e5) x = 0.5;
  }
}
BENCHMARK(BM_LnGamma);

void BM_RegIncBeta(benchmark::State& state) {
  double x = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(numerics::reg_inc_beta(x, 137.3, 8.14));
    x += 0.001;
    if (x > 0.99) x = 0.01;
  }
}
BENCHMARK(BM_RegIncBeta);

void BM_SampleBinomialInversion(benchmark::State& state) {
  numerics::Rng rng(1, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(numerics::sample_binomial(rng, 1000, 0.01));
  }
}
BENCHMARK(BM_SampleBinomialInversion);

void BM_SampleBinomialBtpe(benchmark::State& state) {
  numerics::Rng rng(1, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(numerics::sample_binomial(rng, 100000, 0.3));
  }
}
BENCHMARK(BM_SampleBinomialBtpe);

void BM_ExactPosterior(benchmark::State& state) {
  const auto& counts = *model::find_builtin("pfizer");
  const auto grid = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(exact::posterior_density(counts, grid));
  }
}
BENCHMARK(BM_ExactPosterior)->Arg(501)->Arg(2001);

void BM_GibbsSweeps(benchmark::State& state) {
  const auto& counts = *model::find_builtin("pfizer");
  numerics::Rng rng(7, 0);
  auto sweep_state = gibbs::initial_state(counts, 7, 0);
  for (auto _ : state) {
    sweep_state = gibbs::gibbs_sweep(sweep_state, counts, rng);
    benchmark::DoNotOptimize(sweep_state.eps);
  }
}
BENCHMARK(BM_GibbsSweeps);

void BM_ForecastMc(benchmark::State& state) {
  forecast::ForecastSpec spec;
  spec.cohort_size = 100000;
  spec.assault_mean = 0.01;
  spec.eps = beta::BetaParams{137.3, 8.14};
  spec.n_samples = 100000;
  spec.seed = 3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(forecast::forecast_mc(spec));
  }
}
BENCHMARK(BM_ForecastMc);

}  // namespace

BENCHMARK_MAIN();
