// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

#include "cellsleep/oracle.hpp"

#include <cmath>
#include <exception>

#include "cellsleep/errors.hpp"

namespace cellsleep {

namespace {

constexpr std::uint64_t kPolicyStream = 31;
constexpr std::uint64_t kEvalStream = 32;

std::vector<int> candidates(const ScenarioState& state) {
  if (state.active_count() < 2)
    throw IllegalAction("enumerate_shutdowns: needs at least two active cells");
  std::vector<int> cells;
  for (int k = 0; k < state.num_cells(); ++k)
    if (state.active()[k]) cells.push_back(k);
  return cells;
}

OracleEntry score(const ScenarioState& state, int cell) {
  ScenarioState copy = state;
  const StepResult r = copy.step(cell);
  OracleEntry e;
  e.cell = cell;
  e.value = r.reward;
  if (r.outcome) {
    e.violations = r.outcome->violations;
    e.g_perf = r.outcome->g_perf;
    e.p_gain = r.outcome->p_gain;
  }
  return e;
}

OracleReport assemble(std::vector<OracleEntry> entries) {
  OracleReport rep;
  rep.entries = std::move(entries);
  for (const auto& e : rep.entries) {
    if (rep.best_cell == kNoCell || e.value > rep.best_value) {
      rep.best_cell = e.cell;
      rep.best_value = e.value;
    }
  }
  return rep;
}

bool attains(double value, double best) {
  return value >= best - 1e-12 * std::max(1.0, std::abs(best));
}

ScenarioResult run_scenario(const Policy& policy, std::uint64_t seed,
                            const EnvConfig& config) {
  ScenarioResult res;
  res.seed = seed;
  ScenarioState state = ScenarioState::reset(config, seed);
  const OracleReport rep = enumerate_shutdowns_serial(state);
  res.oracle_cell = rep.best_cell;
  res.oracle_value = rep.best_value;

  Rng rng(derive_seed(seed, kPolicyStream));
  res.action = policy.act(state, rng);
  StepResult step = state.step(res.action);
  res.policy_value = step.reward;
  if (step.outcome) res.outcome = std::move(*step.outcome);
  res.ues_after = state.ues();
  res.match = attains(res.policy_value, res.oracle_value);
  return res;
}

PolicyEvaluation summarize(std::vector<ScenarioResult> details) {
  PolicyEvaluation ev;
  ev.scenarios = static_cast<int>(details.size());
  int matches = 0;
  for (const auto& d : details) {
    ev.mean_policy += d.policy_value;
    ev.mean_oracle += d.oracle_value;
    matches += d.match ? 1 : 0;
  }
  if (ev.scenarios > 0) {
    ev.mean_policy /= ev.scenarios;
    ev.mean_oracle /= ev.scenarios;
    ev.match_rate = static_cast<double>(matches) / ev.scenarios;
  }
  ev.regret = ev.mean_oracle - ev.mean_policy;
  ev.details = std::move(details);
  return ev;
}

}  // namespace

OracleReport enumerate_shutdowns(const ScenarioState& state) {
  const std::vector<int> cells = candidates(state);
  std::vector<OracleEntry> entries(cells.size());
  std::exception_ptr error;
  const int n = static_cast<int>(cells.size());
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    try {
      entries[i] = score(state, cells[i]);
    } catch (...) {
#pragma omp critical(oracle_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return assemble(std::move(entries));
}

OracleReport enumerate_shutdowns_serial(const ScenarioState& state) {
  std::vector<OracleEntry> entries;
  for (int cell : candidates(state)) entries.push_back(score(state, cell));
  return assemble(std::move(entries));
}

int OraclePolicy::act(const ScenarioState& state, Rng&) const {
  return enumerate_shutdowns_serial(state).best_cell;
}

PolicyEvaluation evaluate_policy(const Policy& policy,
                                 std::span<const std::uint64_t> scenario_seeds,
                                 const EnvConfig& config) {
  if (scenario_seeds.empty())
    throw std::invalid_argument("evaluate_policy: no scenarios");
  config.validate();
  const int n = static_cast<int>(scenario_seeds.size());
  std::vector<ScenarioResult> details(n);
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      details[i] = run_scenario(policy, scenario_seeds[i], config);
    } catch (...) {
#pragma omp critical(eval_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return summarize(std::move(details));
}

PolicyEvaluation evaluate_policy_serial(
    const Policy& policy, std::span<const std::uint64_t> scenario_seeds,
    const EnvConfig& config) {
  if (scenario_seeds.empty())
    throw std::invalid_argument("evaluate_policy: no scenarios");
  config.validate();
  std::vector<ScenarioResult> details;
  for (std::uint64_t s : scenario_seeds)
    details.push_back(run_scenario(policy, s, config));
  return summarize(std::move(details));
}

std::vector<std::uint64_t> evaluation_seeds(std::uint64_t seed, int count) {
  std::vector<std::uint64_t> seeds(count);
  for (int i = 0; i < count; ++i)
    seeds[i] = derive_seed(seed, kEvalStream, static_cast<std::uint64_t>(i));
  return seeds;
}

}  // namespace cellsleep
