#include <benchmark/benchmark.h>

#include "softmin/dynamics.hpp"
#include "softmin/energy.hpp"
#include "softmin/random.hpp"

using namespace softmin;

static Swarm random_swarm(const ObjectiveSpec& spec, std::size_t n) {
  Matrix m(n, spec.dimension);
  CounterRng(1, Stream::sampling).fill_uniform(0, m.values());
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < spec.dimension; ++j) {
      m(k, j) = spec.domain_box[j].lo + (spec.domain_box[j].hi - spec.domain_box[j].lo) * m(k, j);
    }
  }
  return Swarm(std::move(m));
}

static void BM_SoftminGradient(benchmark::State& state) {
  const auto spec = make_quadruple_well(2.0);
  const Swarm s = random_swarm(spec, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(softmin_gradient(s, spec, 2.0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SoftminGradient)->RangeMultiplier(10)->Range(10, 10000);

static void BM_SoftminStep(benchmark::State& state) {
  const auto spec = make_double_well(1.0);
  const auto n = static_cast<std::size_t>(state.range(0));
  Swarm s = random_swarm(spec, n);
  Matrix noise(n, 1);
  const IntegratorConfig cfg{1e-4, 1.0, 1, 3, Method::softmin_flow};
  std::int64_t step = 0;
  for (auto _ : state) {
    draw_noise(cfg.seed, step++, noise);
    s = step_softmin(s, spec, 2.0, cfg, noise);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SoftminStep)->Arg(100)->Arg(1000);

static void BM_AnnealingStep(benchmark::State& state) {
  const auto spec = make_double_well(1.0);
  const auto n = static_cast<std::size_t>(state.range(0));
  Swarm s = random_swarm(spec, n);
  Matrix noise(n, 1);
  const IntegratorConfig cfg{1e-4, 1.0, 1, 3, Method::annealing_baseline};
  std::int64_t step = 0;
  for (auto _ : state) {
    draw_noise(cfg.seed, step++, noise);
    s = step_annealing(s, spec, 2.0, cfg, noise);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AnnealingStep)->Arg(100)->Arg(1000);

static void BM_DrawNoise(benchmark::State& state) {
  Matrix noise(static_cast<std::size_t>(state.range(0)), 2);
  std::int64_t step = 0;
  for (auto _ : state) {
    draw_noise(11, step++, noise);
    benchmark::DoNotOptimize(noise.values().data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 2);
}
BENCHMARK(BM_DrawNoise)->Arg(100)->Arg(10000);

static void BM_Weights(benchmark::State& state) {
  std::vector<double> f(static_cast<std::size_t>(state.range(0)));
  CounterRng(2, Stream::sampling).fill_uniform(0, f);
  for (auto _ : state) benchmark::DoNotOptimize(softmin_weights(f, 10.0));
}
BENCHMARK(BM_Weights)->Arg(100)->Arg(10000);

BENCHMARK_MAIN();
