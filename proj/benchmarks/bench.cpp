#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>

#include "retinexad/diffusion.hpp"
#include "retinexad/engine.hpp"
#include "retinexad/enhancers.hpp"
#include "retinexad/metrics.hpp"

using namespace retinexad;

namespace {

Plane noise(int w, int h, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.02, 0.98);
  Plane p(w, h);
  for (double& v : p.values()) v = u(rng);
  return p;
}

ColourImage scene(int n) { return ColourImage(noise(n, n, 1), noise(n, n, 2), noise(n, n, 3)); }

void BM_GaussianSurround(benchmark::State& state) {
  const Plane p = noise(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)), 7);
  const double sigma = static_cast<double>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(gaussian_surround(p, sigma));
}
BENCHMARK(BM_GaussianSurround)->Args({256, 2})->Args({256, 30})->Args({512, 80})->Unit(benchmark::kMillisecond);

void BM_GuidedEnhance(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Plane i = to_log(noise(n, n, 11));
  const EnhancerConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(guided_enhance(i, cfg));
}
BENCHMARK(BM_GuidedEnhance)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_FluxDivergence(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Plane p = noise(n, n, 13);
  for (auto _ : state) benchmark::DoNotOptimize(ad_flux_divergence(p, DiffusionConfig{}));
}
BENCHMARK(BM_FluxDivergence)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_EvolveStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Plane i = to_log(noise(n, n, 17));
  const Plane f = to_log(noise(n, n, 19));
  const PdeParams params;
  for (auto _ : state) benchmark::DoNotOptimize(evolve_step(i, params, f));
}
BENCHMARK(BM_EvolveStep)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_Pqm(benchmark::State& state) {
  const ColourImage img = scene(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pqm(img));
}
BENCHMARK(BM_Pqm)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_RunHsi(benchmark::State& state) {
  const ColourImage img = scene(static_cast<int>(state.range(0)));
  PdeParams params;
  params.fixed_iter = 10;
  for (auto _ : state) benchmark::DoNotOptimize(run_hsi(img, params));
}
BENCHMARK(BM_RunHsi)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
