// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cellsleep/env.hpp"
#include "cellsleep/policy_net.hpp"
#include "cellsleep/rng.hpp"

namespace cellsleep {

enum class ActionMode { Sample, Greedy, Epsilon, Random };

/// Log-probabilities of a softmax restricted to mask-in actions; masked-out
/// entries are -inf. Throws std::invalid_argument on an empty mask.
std::vector<double> masked_log_softmax(std::span<const double> logits,
                                       std::span<const std::uint8_t> mask);

/// Picks an action among mask-in entries. Greedy ties go to the lowest id;
/// Epsilon explores uniformly with probability `epsilon`.
int select_action(std::span<const double> logits,
                  std::span<const std::uint8_t> mask, ActionMode mode, Rng& rng,
                  double epsilon = 0.0);

/// Action mask of a scenario: active cells, and nothing once fewer than two
/// remain.
std::vector<std::uint8_t> action_mask(const ScenarioState& state);

class Policy {
 public:
  virtual ~Policy() = default;
  virtual int act(const ScenarioState& state, Rng& rng) const = 0;
  virtual std::string name() const = 0;
};

/// Greedy deployment policy over a checkpoint: argmax logits (PPO), argmax Q
/// (SARSA), or uniform over active cells (random).
class ParametricPolicy : public Policy {
 public:
  explicit ParametricPolicy(PolicyParameters params);
  int act(const ScenarioState& state, Rng& rng) const override;
  std::string name() const override { return to_string(params_.arch.kind); }
  const PolicyParameters& parameters() const { return params_; }

 private:
  PolicyParameters params_;
};

}  // namespace cellsleep
