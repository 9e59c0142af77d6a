// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <vector>

#include "cellsleep/config.hpp"
#include "cellsleep/metrics.hpp"
#include "cellsleep/oracle.hpp"
#include "cellsleep/train.hpp"

namespace cellsleep {

struct AgentRun {
  AgentKind kind = AgentKind::Ppo;
  TrainResult train;
  PolicyEvaluation eval;
};

struct CompareResult {
  std::vector<std::uint64_t> eval_seeds;  // held out: disjoint from training streams
  std::vector<AgentRun> runs;             // ppo, sarsa, random
};

TrainOptions train_options(const RunConfig& config, AgentKind agent);

/// Scenario seeds used for evaluation under a run seed.
std::vector<std::uint64_t> held_out_seeds(const RunConfig& config);

/// Trains the three agents on the same budget and seed, then evaluates each
/// greedily on the same held-out scenarios.
CompareResult run_compare(const RunConfig& config);

/// Writes the multi-method CSVs (gains.csv from PPO), one subdirectory per
/// agent holding its training curve and checkpoint, and config.ini.
void export_compare(const CompareResult& result, const RunConfig& config,
                    const std::filesystem::path& out_dir);

}  // namespace cellsleep
