// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cellsleep/env.hpp"
#include "cellsleep/policy.hpp"

namespace cellsleep {

struct OracleEntry {
  int cell = kNoCell;
  double value = 0.0;  // reward of shutting this cell, penalties included
  ViolationSet violations;
  double g_perf = 0.0;
  double p_gain = 0.0;
};

struct OracleReport {
  std::vector<OracleEntry> entries;  // one per active cell, ascending id
  int best_cell = kNoCell;           // lowest id among maximizers
  double best_value = 0.0;
};

/// Scores every legal single-cell shutdown of the current state. Each
/// candidate runs on a copy with the same shutdown stream a step() of that
/// cell would use, so the entries are exactly the rewards a policy would
/// realize. Candidates are evaluated in parallel (OpenMP). Throws
/// IllegalAction with fewer than two active cells.
OracleReport enumerate_shutdowns(const ScenarioState& state);

/// Single-threaded reference of enumerate_shutdowns; identical output.
OracleReport enumerate_shutdowns_serial(const ScenarioState& state);

/// The oracle as a policy: always the best cell.
class OraclePolicy : public Policy {
 public:
  int act(const ScenarioState& state, Rng& rng) const override;
  std::string name() const override { return "oracle"; }
};

struct ScenarioResult {
  std::uint64_t seed = 0;
  int action = kNoCell;
  double policy_value = 0.0;  // reward realized by stepping the policy's action
  int oracle_cell = kNoCell;
  double oracle_value = 0.0;
  bool match = false;  // the policy's action attains the oracle maximum
  ShutdownOutcome outcome;       // policy's outcome (empty when invalid)
  std::vector<UeSession> ues_after;
};

struct PolicyEvaluation {
  int scenarios = 0;
  double mean_policy = 0.0;
  double mean_oracle = 0.0;
  double regret = 0.0;
  double match_rate = 0.0;
  std::vector<ScenarioResult> details;  // in seed order
};

/// Runs the policy greedily once per scenario seed and compares it with the
/// oracle on the same scenario. Scenarios run in parallel (OpenMP).
PolicyEvaluation evaluate_policy(const Policy& policy,
                                 std::span<const std::uint64_t> scenario_seeds,
                                 const EnvConfig& config);

/// Single-threaded reference of evaluate_policy; identical output.
PolicyEvaluation evaluate_policy_serial(
    const Policy& policy, std::span<const std::uint64_t> scenario_seeds,
    const EnvConfig& config);

/// Held-out evaluation seeds, disjoint in stream from training episodes.
std::vector<std::uint64_t> evaluation_seeds(std::uint64_t seed, int count);

}  // namespace cellsleep
