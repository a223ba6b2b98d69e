#include <benchmark/benchmark.h>

#include "srp/genfun.hpp"
#include "srp/partition.hpp"
#include "srp/sampler.hpp"
#include "srp/weights.hpp"

namespace {

srp::ModelParams params_1d(std::int64_t n, double rho) {
  return srp::ModelParams::with_rho(srp::JumpDensity::gaussian_isotropic(1, 1.0), 1.0, rho, n);
}

void BM_WeightTable1D(benchmark::State& state) {
  auto params = params_1d(state.range(0), 1.0);
  for (auto _ : state) {
    auto table = srp::make_weight_table(params);
    benchmark::DoNotOptimize(table.w.data());
  }
}
BENCHMARK(BM_WeightTable1D)->Arg(1 << 10)->Arg(1 << 13);

void BM_PartitionRecursion(benchmark::State& state) {
  auto params = params_1d(state.range(0), 1.0);
  auto table = srp::make_weight_table(params);
  for (auto _ : state) {
    auto pt = srp::make_partition_table(table);
    benchmark::DoNotOptimize(pt.log_h.data());
  }
}
BENCHMARK(BM_PartitionRecursion)->Arg(1 << 10)->Arg(1 << 12)->Arg(1 << 14);

void BM_Saddle(benchmark::State& state) {
  auto params = params_1d(1 << 12, 1.0);
  for (auto _ : state) {
    auto s = srp::solve_saddle(params);
    benchmark::DoNotOptimize(s.r);
  }
}
BENCHMARK(BM_Saddle);

void BM_SampleCycles(benchmark::State& state) {
  auto params = params_1d(state.range(0), 4.0);
  auto wt = srp::make_weight_table(params);
  auto pt = srp::make_partition_table(wt);
  std::uint64_t replica = 0;
  for (auto _ : state) {
    srp::RngStream rng(7, replica++);
    auto sample = srp::sample_cycle_lengths(wt, pt, rng);
    benchmark::DoNotOptimize(sample.ordered.data());
  }
}
BENCHMARK(BM_SampleCycles)->Arg(1 << 10)->Arg(1 << 13);

}  // namespace

BENCHMARK_MAIN();
