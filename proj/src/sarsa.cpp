// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

#include "cellsleep/sarsa.hpp"

#include <algorithm>
#include <stdexcept>

#include "cellsleep/errors.hpp"

namespace cellsleep {

void SarsaHyper::validate() const {
  if (!(learning_rate > 0.0))
    throw ConfigError("sarsa.learning_rate", "must be > 0");
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw ConfigError("sarsa.gamma", "must be in [0, 1]");
  if (!(epsilon_start >= 0.0 && epsilon_start <= 1.0))
    throw ConfigError("sarsa.epsilon_start", "must be in [0, 1]");
  if (!(epsilon_end >= 0.0 && epsilon_end <= 1.0))
    throw ConfigError("sarsa.epsilon_end", "must be in [0, 1]");
}

double sarsa_epsilon(const SarsaHyper& hyper, std::int64_t step,
                     std::int64_t budget) {
  if (budget <= 1) return hyper.epsilon_end;
  const double frac =
      std::clamp(static_cast<double>(step) / static_cast<double>(budget - 1), 0.0, 1.0);
  return hyper.epsilon_start + frac * (hyper.epsilon_end - hyper.epsilon_start);
}

double sarsa_update(PolicyParameters& q, const Transition& transition,
                    int next_action, double lr, double gamma) {
  const int n = q.arch.inputs;
  const int k = q.arch.actions;
  if (q.arch.kind != AgentKind::Sarsa)
    throw std::invalid_argument("sarsa_update: not a linear-Q architecture");
  if (transition.action < 0 || transition.action >= k)
    throw std::invalid_argument("sarsa_update: action out of range");
  const auto q_s = q_values(q, transition.observation);
  double target = transition.reward;
  if (!transition.done) {
    if (next_action < 0 || next_action >= k)
      throw std::invalid_argument("sarsa_update: next action out of range");
    target += gamma * q_values(q, transition.next_observation)[next_action];
  }
  const double td = target - q_s[transition.action];
  double* w = q.values.data() + static_cast<std::size_t>(transition.action) * n;
  for (int i = 0; i < n; ++i) w[i] += lr * td * transition.observation[i];
  return td;
}

}  // namespace cellsleep
