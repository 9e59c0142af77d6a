// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

#include "cellsleep/train.hpp"

#include <algorithm>
#include <stdexcept>

#include "cellsleep/policy.hpp"
#include "cellsleep/rollout.hpp"

namespace cellsleep {

namespace {

constexpr std::uint64_t kInitStream = 21;
constexpr std::uint64_t kShuffleStream = 22;
constexpr std::uint64_t kSarsaStream = 23;

int observation_size(const EnvConfig& config) {
  return ScenarioState::kFeaturesPerCell * config.topology.rows * config.topology.cols;
}

int action_count(const EnvConfig& config) {
  return config.topology.rows * config.topology.cols;
}

double mean_reward(const RolloutBatch& b) {
  double s = 0.0;
  for (const auto& t : b.transitions) s += t.reward;
  return b.transitions.empty() ? 0.0 : s / b.transitions.size();
}

// Episodes per rollout so one rollout covers about rollout_length steps.
int episodes_for(std::int64_t steps_left, const EnvConfig& config,
                 const PpoHyper& ppo) {
  const std::int64_t h = config.horizon;
  const std::int64_t want = std::min<std::int64_t>(ppo.rollout_length, steps_left);
  return static_cast<int>(std::max<std::int64_t>(1, (want + h - 1) / h));
}

TrainResult train_batched(const EnvConfig& config, const TrainOptions& opt) {
  TrainResult r;
  r.params = initial_parameters(config, opt);
  AdamOptimizer adam(r.params.values.size());
  Rng shuffle(derive_seed(opt.seed, kShuffleStream));
  std::int64_t episode = 0;
  while (r.steps < opt.budget_steps) {
    const int count = episodes_for(opt.budget_steps - r.steps, config, opt.ppo);
    RolloutBatch batch = collect_rollout(config, r.params, opt.seed, episode, count);
    episode += count;
    r.steps += static_cast<std::int64_t>(batch.transitions.size());
    r.curve.push_back({r.steps, mean_reward(batch)});
    if (opt.agent == AgentKind::Ppo)
      ppo_update(r.params, adam, batch.transitions, opt.ppo, shuffle);
  }
  return r;
}

TrainResult train_sarsa(const EnvConfig& config, const TrainOptions& opt) {
  TrainResult r;
  r.params = initial_parameters(config, opt);
  std::int64_t episode = 0;
  double window = 0.0;
  std::int64_t in_window = 0;
  auto choose = [&](const ScenarioState& s, const std::vector<double>& obs,
                    Rng& rng) {
    const auto mask = action_mask(s);
    const double eps = sarsa_epsilon(opt.sarsa, r.steps, opt.budget_steps);
    return select_action(q_values(r.params, obs), mask, ActionMode::Epsilon, rng, eps);
  };
  while (r.steps < opt.budget_steps) {
    ScenarioState state = ScenarioState::reset(config, episode_seed(opt.seed, episode));
    Rng rng(derive_seed(opt.seed, kSarsaStream, static_cast<std::uint64_t>(episode)));
    ++episode;
    std::vector<double> obs = state.observe();
    int action = choose(state, obs, rng);
    for (;;) {
      StepResult step = state.step(action);
      Transition t;
      t.observation = std::move(obs);
      t.action = action;
      t.reward = step.reward;
      t.done = step.done;
      t.next_observation = step.observation;
      int next_action = 0;
      if (!step.done) next_action = choose(state, t.next_observation, rng);
      sarsa_update(r.params, t, next_action, opt.sarsa.learning_rate, opt.sarsa.gamma);
      ++r.steps;
      window += step.reward;
      if (++in_window == opt.ppo.rollout_length) {
        r.curve.push_back({r.steps, window / in_window});
        window = 0.0;
        in_window = 0;
      }
      if (step.done || r.steps >= opt.budget_steps) break;
      obs = std::move(step.observation);
      action = next_action;
    }
  }
  if (in_window > 0) r.curve.push_back({r.steps, window / in_window});
  return r;
}

}  // namespace

PolicyParameters initial_parameters(const EnvConfig& config,
                                    const TrainOptions& options) {
  const int inputs = observation_size(config);
  const int actions = action_count(config);
  switch (options.agent) {
    case AgentKind::Ppo:
      return init_actor_critic(inputs, options.ppo.hidden, actions,
                               derive_seed(options.seed, kInitStream));
    case AgentKind::Sarsa:
      return init_linear_q(inputs, actions);
    case AgentKind::Random:
      return make_random_policy(inputs, actions);
  }
  throw std::invalid_argument("initial_parameters: unknown agent");
}

TrainResult train(const EnvConfig& config, const TrainOptions& options) {
  config.validate();
  options.ppo.validate();
  options.sarsa.validate();
  if (options.budget_steps < 0)
    throw std::invalid_argument("train: negative budget");
  if (options.agent == AgentKind::Sarsa) return train_sarsa(config, options);
  return train_batched(config, options);
}

}  // namespace cellsleep
