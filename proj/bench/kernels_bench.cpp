// Serial reference kernels against their OpenMP versions.

#include "relcrypt/adversary.hpp"
#include "relcrypt/cuts.hpp"
#include "relcrypt/protocols.hpp"

#include "oracles.hpp"

#include <benchmark/benchmark.h>

using namespace relcrypt;

namespace {

CausalSystem mitm_closed() {
  const MitmGeometry g = canonical_mitm_geometry();
  return plug(equality_distinguisher(g.PA, g.PB).system(), mitm_composite(rat(1, 4), MitmStrategy::copy_c()));
}

const CausalSystem& stacked_t0() {
  static const CausalSystem t0 = [] {
    const AbortFlipGeometry g = canonical_abort_geometry();
    return impossibility_chain(stack_to_half_coin(cd_abort_candidate_direct(g), g)).t0;
  }();
  return t0;
}

FinitePoset wide_poset() {
  oracle::Rng rng(5);
  return oracle::random_poset(rng, 18, 0.1);
}

void BM_DistributionSerial(benchmark::State& st) {
  const CausalSystem& s = stacked_t0();
  for (auto _ : st) benchmark::DoNotOptimize(kernels::distribution_serial(s, {}));
}
void BM_DistributionParallel(benchmark::State& st) {
  const CausalSystem& s = stacked_t0();
  for (auto _ : st) benchmark::DoNotOptimize(kernels::distribution_parallel(s, {}));
}

void BM_CausalitySerial(benchmark::State& st) {
  const CausalSystem s = construct_cf_from_cd(canonical_cf_geometry()).find("dishonest_B").ideal;
  for (auto _ : st) benchmark::DoNotOptimize(kernels::causality_serial(s));
}
void BM_CausalityParallel(benchmark::State& st) {
  const CausalSystem s = construct_cf_from_cd(canonical_cf_geometry()).find("dishonest_B").ideal;
  for (auto _ : st) benchmark::DoNotOptimize(kernels::causality_parallel(s));
}

void BM_CutsSerial(benchmark::State& st) {
  const FinitePoset p = wide_poset();
  for (auto _ : st) benchmark::DoNotOptimize(kernels::all_cuts_serial(p));
}
void BM_CutsParallel(benchmark::State& st) {
  const FinitePoset p = wide_poset();
  for (auto _ : st) benchmark::DoNotOptimize(kernels::all_cuts_parallel(p));
}

void BM_MonteCarloSerial(benchmark::State& st) {
  const CausalSystem s = mitm_closed();
  for (auto _ : st) benchmark::DoNotOptimize(kernels::count_guess_zero_serial(s, 20000, 1));
}
void BM_MonteCarloParallel(benchmark::State& st) {
  const CausalSystem s = mitm_closed();
  for (auto _ : st) benchmark::DoNotOptimize(kernels::count_guess_zero_parallel(s, 20000, 1));
}

}  // namespace

BENCHMARK(BM_DistributionSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DistributionParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CausalitySerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CausalityParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CutsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CutsParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarloSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarloParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
