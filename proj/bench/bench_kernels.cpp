// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

// Serial reference vs OpenMP kernel, side by side.

#include <benchmark/benchmark.h>

#include "cellsleep/oracle.hpp"
#include "cellsleep/policy.hpp"
#include "cellsleep/rollout.hpp"

using namespace cellsleep;

namespace {

const EnvConfig& config() {
  static const EnvConfig cfg;
  return cfg;
}

template <bool Parallel>
void BM_Enumerate(benchmark::State& st) {
  const auto s = ScenarioState::reset(config(), 3);
  for (auto _ : st)
    benchmark::DoNotOptimize(Parallel ? enumerate_shutdowns(s) : enumerate_shutdowns_serial(s));
}

template <bool Parallel>
void BM_Evaluate(benchmark::State& st) {
  const auto seeds = evaluation_seeds(1, static_cast<int>(st.range(0)));
  const ParametricPolicy policy(init_actor_critic(60, {64, 64}, 12, 1));
  for (auto _ : st)
    benchmark::DoNotOptimize(Parallel ? evaluate_policy(policy, seeds, config())
                                      : evaluate_policy_serial(policy, seeds, config()));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <bool Parallel>
void BM_Rollout(benchmark::State& st) {
  const auto params = init_actor_critic(60, {64, 64}, 12, 1);
  const int n = static_cast<int>(st.range(0));
  for (auto _ : st)
    benchmark::DoNotOptimize(Parallel ? collect_rollout(config(), params, 1, 0, n)
                                      : collect_rollout_serial(config(), params, 1, 0, n));
  st.SetItemsProcessed(st.iterations() * n);
}

}  // namespace

BENCHMARK(BM_Enumerate<false>)->Name("enumerate/serial")->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Enumerate<true>)->Name("enumerate/omp")->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_Evaluate<false>)->Name("evaluate/serial")->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Evaluate<true>)->Name("evaluate/omp")->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Rollout<false>)->Name("rollout/serial")->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Rollout<true>)->Name("rollout/omp")->Arg(1024)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
