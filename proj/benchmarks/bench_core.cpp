#include <benchmark/benchmark.h>

#include "macrobell/anticommuting.hpp"
#include "macrobell/bell.hpp"
#include "macrobell/correlations.hpp"
#include "macrobell/monogamy.hpp"
#include "macrobell/random.hpp"
#include "macrobell/states.hpp"

namespace {

using namespace macrobell;

void BM_EffectiveState(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(1);
  const DensityMatrix rho(rng.ginibre_density(1 << n, 16));
  std::vector<int> a, b;
  for (int q = 0; q < n; ++q) (q < n / 2 ? a : b).push_back(q);
  const Partition partition{{a, b}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(effective_state(rho, partition));
  }
}
BENCHMARK(BM_EffectiveState)->Arg(6)->Arg(8)->Arg(10);

void BM_CorrelationTensorSweep(benchmark::State& state) {
  Rng rng(2);
  const DensityMatrix rho(rng.ginibre_density(1 << 8, 8));
  const Partition partition{{{0, 1, 2, 3}, {4, 5, 6, 7}}};
  const DensityMatrix eff = effective_state(rho, partition);
  for (auto _ : state) {
    const std::vector<MeasurementFrame> frames{rng.frame(), rng.frame()};
    benchmark::DoNotOptimize(zb_value(correlation_tensor(eff, frames)));
  }
}
BENCHMARK(BM_CorrelationTensorSweep);

void BM_PqBound(benchmark::State& state) {
  Rng rng(3);
  const PureState psi(rng.haar_vector(1 << 8));
  const Partition partition{{{0, 1, 2, 3}, {4, 5, 6, 7}}};
  const std::vector<MeasurementFrame> frames{rng.frame(), rng.frame()};
  for (auto _ : state) {
    benchmark::DoNotOptimize(pq_bound(psi, partition, frames));
  }
}
BENCHMARK(BM_PqBound);

void BM_FoldedTree(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(folded_tree(k));
  }
}
BENCHMARK(BM_FoldedTree)->Arg(4)->Arg(8);

void BM_Symmetrize(benchmark::State& state) {
  Rng rng(4);
  const DensityMatrix rho(rng.ginibre_density(64, 64));
  const Partition partition = Partition::contiguous({3, 3});
  for (auto _ : state) {
    benchmark::DoNotOptimize(permutation_symmetrize(rho, partition));
  }
}
BENCHMARK(BM_Symmetrize);

void BM_Membership3x3(benchmark::State& state) {
  Rng rng(5);
  const DensityMatrix rho(rng.ginibre_density(64, 64));
  const Partition partition = Partition::contiguous({3, 3});
  std::vector<std::vector<Direction>> dirs(2);
  for (auto& region : dirs) {
    for (int s = 0; s < 3; ++s) region.push_back(rng.direction());
  }
  const BellScenario scenario = projective_qubit_scenario(dirs);
  const JointDistribution p = quantum_distribution(effective_state(rho, partition), scenario);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lhv_membership(p, scenario));
  }
}
BENCHMARK(BM_Membership3x3);

void BM_ChshOptimize(benchmark::State& state) {
  const DensityMatrix singlet = to_density(named_state("singlet", 2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(chsh_optimize(singlet));
  }
}
BENCHMARK(BM_ChshOptimize);

}  // namespace

BENCHMARK_MAIN();
