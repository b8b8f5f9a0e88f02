#include <benchmark/benchmark.h>

#include "qlat/lambda_tau.hpp"
#include "qlat/maxent.hpp"
#include "qlat/subspace.hpp"

using namespace qlat;

static void BM_GoodRepresentative(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  Rng rng(5);
  std::vector<HermitianOperator> ops{random_density(d, d / 2 + 1, 6).op()};
  for (int k = 0; k < 3; ++k) ops.emplace_back(random_hermitian_matrix(d, rng));
  const HermitianSubspace s = span_subspace(ops);
  for (auto _ : state) benchmark::DoNotOptimize(good_representative(s).is_empty());
}
BENCHMARK(BM_GoodRepresentative)->Arg(2)->Arg(4)->Arg(8);

static void BM_SolveMaxEnt(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  Rng rng(7);
  const DensityMatrix interior = random_density(d, d, 8);
  std::vector<MeanValueConstraint> cons;
  for (int k = 0; k < 3; ++k) {
    const HermitianOperator r(random_hermitian_matrix(d, rng));
    cons.push_back({r, hs_inner(r, interior.op())});
  }
  for (auto _ : state) benchmark::DoNotOptimize(solve_maxent(cons, d).entropy);
}
BENCHMARK(BM_SolveMaxEnt)->Arg(2)->Arg(4)->Arg(8);

static void BM_LambdaTau(benchmark::State& state) {
  std::vector<DensityMatrix> g;
  for (int k = 0; k < static_cast<int>(state.range(0)); ++k) g.push_back(random_density(4, 2, 9 + k));
  const StatePolytope c(g);
  for (auto _ : state) benchmark::DoNotOptimize(lambda_tau(c, BipartiteDims(2, 2)).size());
}
BENCHMARK(BM_LambdaTau)->Arg(2)->Arg(8);
