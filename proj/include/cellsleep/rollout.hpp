// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "cellsleep/env.hpp"
#include "cellsleep/policy.hpp"
#include "cellsleep/ppo.hpp"

namespace cellsleep {

struct RolloutBatch {
  std::vector<Transition> transitions;  // episode order, then step order
  int episodes = 0;
};

/// Seed of training episode `episode` under a run seed.
std::uint64_t episode_seed(std::uint64_t run_seed, std::int64_t episode);

/// Plays episodes [first_episode, first_episode + count) to completion with
/// a stochastic policy: sampled from PPO logits, or uniform for a random
/// agent. Every episode owns its scenario and action streams, so episodes run
/// in parallel (OpenMP) and the result does not depend on the thread count.
RolloutBatch collect_rollout(const EnvConfig& config,
                             const PolicyParameters& params,
                             std::uint64_t run_seed, std::int64_t first_episode,
                             int count);

/// Single-threaded reference of collect_rollout; identical output.
RolloutBatch collect_rollout_serial(const EnvConfig& config,
                                    const PolicyParameters& params,
                                    std::uint64_t run_seed,
                                    std::int64_t first_episode, int count);

}  // namespace cellsleep
