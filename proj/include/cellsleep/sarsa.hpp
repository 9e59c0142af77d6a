// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "cellsleep/policy_net.hpp"
#include "cellsleep/ppo.hpp"

namespace cellsleep {

struct SarsaHyper {
  double learning_rate = 0.01;
  double gamma = 0.99;
  double epsilon_start = 0.3;
  double epsilon_end = 0.05;

  void validate() const;
  bool operator==(const SarsaHyper&) const = default;
};

/// Exploration rate after `step` of `budget` steps, linear from start to end.
double sarsa_epsilon(const SarsaHyper& hyper, std::int64_t step,
                     std::int64_t budget);

/// Semi-gradient SARSA step on a linear Q:
///   w_a += lr * (r + gamma * Q(s', a') * (1 - done) - Q(s, a)) * phi(s).
/// `next_action` is ignored for terminal transitions. Returns the TD error.
double sarsa_update(PolicyParameters& q, const Transition& transition,
                    int next_action, double lr, double gamma);

}  // namespace cellsleep
