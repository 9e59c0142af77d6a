// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

#include "cellsleep/compare.hpp"

#include <fstream>

#include "cellsleep/checkpoint.hpp"
#include "cellsleep/rng.hpp"

namespace cellsleep {

TrainOptions train_options(const RunConfig& config, AgentKind agent) {
  TrainOptions o;
  o.agent = agent;
  o.budget_steps = config.budget_steps;
  o.seed = config.seed;
  o.ppo = config.ppo;
  o.sarsa = config.sarsa;
  return o;
}

std::vector<std::uint64_t> held_out_seeds(const RunConfig& config) {
  return evaluation_seeds(derive_seed(config.seed, 51), config.eval_scenarios);
}

CompareResult run_compare(const RunConfig& config) {
  config.validate();
  CompareResult r;
  r.eval_seeds = held_out_seeds(config);
  for (AgentKind kind : {AgentKind::Ppo, AgentKind::Sarsa, AgentKind::Random}) {
    AgentRun run;
    run.kind = kind;
    run.train = train(config.env, train_options(config, kind));
    ParametricPolicy policy(run.train.params);
    run.eval = evaluate_policy(policy, r.eval_seeds, config.env);
    r.runs.push_back(std::move(run));
  }
  return r;
}

void export_compare(const CompareResult& result, const RunConfig& config,
                    const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<MethodEvaluation> methods;
  for (const auto& run : result.runs) {
    methods.push_back({to_string(run.kind), run.eval});
    const auto dir = out_dir / to_string(run.kind);
    std::filesystem::create_directories(dir);
    write_training_curve(dir / "training_curve.csv", run.train.curve);
    save_checkpoint({run.train.params, config.seed}, dir / "checkpoint.ckpt");
  }
  if (!result.runs.empty())
    write_training_curve(out_dir / "training_curve.csv", result.runs.front().train.curve);
  export_evaluation(out_dir, methods, 0);
  std::ofstream cfg(out_dir / "config.ini", std::ios::binary | std::ios::trunc);
  cfg << serialize_config(config);
}

}  // namespace cellsleep
