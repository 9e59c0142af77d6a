// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "cellsleep/env.hpp"
#include "cellsleep/policy_net.hpp"
#include "cellsleep/ppo.hpp"
#include "cellsleep/sarsa.hpp"

namespace cellsleep {

struct CurvePoint {
  std::int64_t step = 0;  // cumulative environment steps
  double mean_reward = 0.0;
};

struct TrainOptions {
  AgentKind agent = AgentKind::Ppo;
  std::int64_t budget_steps = 0;
  std::uint64_t seed = 0;
  PpoHyper ppo;
  SarsaHyper sarsa;
};

struct TrainResult {
  PolicyParameters params;
  std::vector<CurvePoint> curve;  // one point per rollout of ppo.rollout_length steps
  std::int64_t steps = 0;
};

/// Untrained parameters for an agent on this environment.
PolicyParameters initial_parameters(const EnvConfig& config,
                                    const TrainOptions& options);

/// Episodic training with per-episode derived scenario seeds. Deterministic
/// for a fixed seed; budget 0 returns the initialization.
TrainResult train(const EnvConfig& config, const TrainOptions& options);

}  // namespace cellsleep
