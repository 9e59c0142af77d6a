// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

#include "cellsleep/rollout.hpp"

#include <exception>

namespace cellsleep {

namespace {

constexpr std::uint64_t kEpisodeStream = 11;
constexpr std::uint64_t kActionStream = 12;

std::vector<Transition> play_episode(const EnvConfig& config,
                                     const PolicyParameters& params,
                                     std::uint64_t run_seed,
                                     std::int64_t episode) {
  ScenarioState state = ScenarioState::reset(config, episode_seed(run_seed, episode));
  Rng rng(derive_seed(run_seed, kActionStream, static_cast<std::uint64_t>(episode)));
  std::vector<Transition> out;
  std::vector<double> obs = state.observe();
  for (;;) {
    Transition t;
    t.mask = action_mask(state);
    if (params.arch.kind == AgentKind::Ppo) {
      const auto net = policy_forward(params, obs);
      t.action = select_action(net.logits, t.mask, ActionMode::Sample, rng);
      t.log_prob = masked_log_softmax(net.logits, t.mask)[t.action];
      t.value = net.value;
    } else {
      const std::vector<double> flat(t.mask.size(), 0.0);
      t.action = select_action(flat, t.mask, ActionMode::Random, rng);
    }
    StepResult r = state.step(t.action);
    t.observation = std::move(obs);
    t.reward = r.reward;
    t.done = r.done;
    t.next_observation = r.observation;
    obs = std::move(r.observation);
    out.push_back(std::move(t));
    if (r.done) break;
  }
  return out;
}

RolloutBatch concat(std::vector<std::vector<Transition>>& episodes) {
  RolloutBatch b;
  b.episodes = static_cast<int>(episodes.size());
  for (auto& e : episodes)
    for (auto& t : e) b.transitions.push_back(std::move(t));
  return b;
}

}  // namespace

std::uint64_t episode_seed(std::uint64_t run_seed, std::int64_t episode) {
  return derive_seed(run_seed, kEpisodeStream, static_cast<std::uint64_t>(episode));
}

RolloutBatch collect_rollout(const EnvConfig& config,
                             const PolicyParameters& params,
                             std::uint64_t run_seed, std::int64_t first_episode,
                             int count) {
  std::vector<std::vector<Transition>> episodes(count);
  std::exception_ptr error;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < count; ++i) {
    try {
      episodes[i] = play_episode(config, params, run_seed, first_episode + i);
    } catch (...) {
#pragma omp critical(rollout_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return concat(episodes);
}

RolloutBatch collect_rollout_serial(const EnvConfig& config,
                                    const PolicyParameters& params,
                                    std::uint64_t run_seed,
                                    std::int64_t first_episode, int count) {
  std::vector<std::vector<Transition>> episodes(count);
  for (int i = 0; i < count; ++i)
    episodes[i] = play_episode(config, params, run_seed, first_episode + i);
  return concat(episodes);
}

}  // namespace cellsleep
