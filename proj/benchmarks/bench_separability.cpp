#include <benchmark/benchmark.h>

#include "qlat/separability.hpp"

using namespace qlat;

static void BM_ProductExtrema(benchmark::State& state) {
  const int d2 = static_cast<int>(state.range(0));
  const BipartiteDims dims(2, d2);
  const HermitianOperator op = random_density(dims.total(), dims.total(), 1).op();
  for (auto _ : state) {
    benchmark::DoNotOptimize(product_extrema(op, dims, ExtremumMode::max, {.restarts = 20, .seed = 1}).value);
  }
}
BENCHMARK(BM_ProductExtrema)->Arg(2)->Arg(3)->Arg(4);

static void BM_SpectralCriterion(benchmark::State& state) {
  const DensityMatrix rho = werner_state(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(spectral_criterion(rho, BipartiteDims(2, 2)).verdict);
}
BENCHMARK(BM_SpectralCriterion);

static void BM_WitnessSearch(benchmark::State& state) {
  const BipartiteDims dims(2, 3);
  const DensityMatrix rho = random_density(6, 3, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(random_witness_search(rho, dims, {.samples = 20, .restarts = 5, .seed = 3}).verdict);
  }
}
BENCHMARK(BM_WitnessSearch)->Unit(benchmark::kMillisecond);

static void BM_ProjectSeparable(benchmark::State& state) {
  const DensityMatrix rho = werner_state(0.3);
  const auto iterations = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        project_separable(rho, BipartiteDims(2, 2), {.max_iterations = iterations, .seed = 4}).approximation.distance);
  }
}
BENCHMARK(BM_ProjectSeparable)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);
