// Serial reference kernels against their OpenMP counterparts.
#include <fstream>
#include <sstream>

#include <benchmark/benchmark.h>

#include "cochranq/cochran.hpp"
#include "cochranq/condition.hpp"
#include "cochranq/judgement.hpp"
#include "cochranq/powersim.hpp"
#include "cochranq/subgroup.hpp"

namespace {

using namespace cochranq;

const JudgementMatrix& sample_panel() {
  static const JudgementMatrix m = [] {
    std::ifstream in(COCHRANQ_FIXTURE_DIR "/sample_panel.csv");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_judgement_csv(ss.str());
  }();
  return m;
}

const WMatrix& table3_w() {
  static const WMatrix w = [] {
    const auto& m = sample_panel();
    return build_w_matrix(m, apply_condition(m, ConditionSpec::concordance(50)));
  }();
  return w;
}

void BM_McSerial(benchmark::State& state) {
  PermutationBudget budget;
  budget.mc_replicates = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mc_permutation_p_serial(table3_w(), budget));
}

void BM_McParallel(benchmark::State& state) {
  PermutationBudget budget;
  budget.mc_replicates = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mc_permutation_p(table3_w(), budget));
}

void BM_PowerSerial(benchmark::State& state) {
  const auto spec = builtin_scenarios().front();
  for (auto _ : state)
    benchmark::DoNotOptimize(estimate_power_serial(spec, static_cast<std::size_t>(state.range(0)), 7));
}

void BM_PowerParallel(benchmark::State& state) {
  const auto spec = builtin_scenarios().front();
  for (auto _ : state)
    benchmark::DoNotOptimize(estimate_power(spec, static_cast<std::size_t>(state.range(0)), 7));
}

void BM_SubgroupsSerial(benchmark::State& state) {
  SubgroupOptions options;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        analyze_subgroups_serial(sample_panel(), ConditionSpec::concordance(50), options));
}

void BM_SubgroupsParallel(benchmark::State& state) {
  SubgroupOptions options;
  for (auto _ : state)
    benchmark::DoNotOptimize(analyze_subgroups(sample_panel(), ConditionSpec::concordance(50), options));
}

}  // namespace

BENCHMARK(BM_McSerial)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_McParallel)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PowerSerial)->Arg(5'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PowerParallel)->Arg(5'000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SubgroupsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SubgroupsParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
