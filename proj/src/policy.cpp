// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

#include "cellsleep/policy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cellsleep {

std::vector<double> masked_log_softmax(std::span<const double> logits,
                                       std::span<const std::uint8_t> mask) {
  if (logits.size() != mask.size())
    throw std::invalid_argument("masked_log_softmax: mask length mismatch");
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  double hi = kNegInf;
  for (std::size_t i = 0; i < logits.size(); ++i)
    if (mask[i]) hi = std::max(hi, logits[i]);
  if (hi == kNegInf)
    throw std::invalid_argument("masked_log_softmax: no action allowed");
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i)
    if (mask[i]) sum += std::exp(logits[i] - hi);
  const double lse = hi + std::log(sum);
  std::vector<double> out(logits.size(), kNegInf);
  for (std::size_t i = 0; i < logits.size(); ++i)
    if (mask[i]) out[i] = logits[i] - lse;
  return out;
}

namespace {

int greedy(std::span<const double> logits, std::span<const std::uint8_t> mask) {
  int best = -1;
  for (std::size_t i = 0; i < logits.size(); ++i)
    if (mask[i] && (best < 0 || logits[i] > logits[best])) best = static_cast<int>(i);
  return best;
}

int uniform_masked(std::span<const std::uint8_t> mask, Rng& rng) {
  std::vector<int> allowed;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) allowed.push_back(static_cast<int>(i));
  return allowed[rng.below(allowed.size())];
}

}  // namespace

int select_action(std::span<const double> logits,
                  std::span<const std::uint8_t> mask, ActionMode mode, Rng& rng,
                  double epsilon) {
  if (logits.size() != mask.size())
    throw std::invalid_argument("select_action: mask length mismatch");
  bool any = false;
  for (auto m : mask) any = any || m;
  if (!any) throw std::invalid_argument("select_action: empty action mask");

  switch (mode) {
    case ActionMode::Greedy:
      return greedy(logits, mask);
    case ActionMode::Random:
      return uniform_masked(mask, rng);
    case ActionMode::Epsilon:
      if (rng.uniform() < epsilon) return uniform_masked(mask, rng);
      return greedy(logits, mask);
    case ActionMode::Sample: {
      const auto logp = masked_log_softmax(logits, mask);
      std::vector<double> probs(logp.size());
      for (std::size_t i = 0; i < logp.size(); ++i)
        probs[i] = mask[i] ? std::exp(logp[i]) : 0.0;
      return static_cast<int>(rng.categorical(probs));
    }
  }
  return greedy(logits, mask);
}

std::vector<std::uint8_t> action_mask(const ScenarioState& state) {
  std::vector<std::uint8_t> mask(state.active().begin(), state.active().end());
  if (state.active_count() < 2) std::fill(mask.begin(), mask.end(), 0);
  return mask;
}

ParametricPolicy::ParametricPolicy(PolicyParameters params)
    : params_(std::move(params)) {
  params_.validate();
}

int ParametricPolicy::act(const ScenarioState& state, Rng& rng) const {
  const auto mask = action_mask(state);
  const std::vector<double> none(mask.size(), 0.0);
  switch (params_.arch.kind) {
    case AgentKind::Ppo: {
      const auto out = policy_forward(params_, state.observe());
      return select_action(out.logits, mask, ActionMode::Greedy, rng);
    }
    case AgentKind::Sarsa:
      return select_action(q_values(params_, state.observe()), mask,
                           ActionMode::Greedy, rng);
    case AgentKind::Random:
      return select_action(none, mask, ActionMode::Random, rng);
  }
  return 0;
}

}  // namespace cellsleep
