// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

#include "cellsleep/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>

#include "cellsleep/checkpoint.hpp"
#include "cellsleep/compare.hpp"
#include "cellsleep/config.hpp"
#include "cellsleep/errors.hpp"
#include "cellsleep/kpi.hpp"
#include "cellsleep/metrics.hpp"
#include "cellsleep/oracle.hpp"
#include "cellsleep/rng.hpp"
#include "cellsleep/train.hpp"

namespace cellsleep {
namespace {

struct Args {
  std::string config;
  std::string agent;
  std::optional<std::int64_t> steps;
  std::optional<std::uint64_t> seed;
  std::optional<int> scenarios;
  std::string out;
  std::string checkpoint;
  std::string csv;
  bool redistribute = false;
};

RunConfig base_config(const Args& a) {
  RunConfig cfg = a.config.empty() ? RunConfig{} : load_config(a.config);
  if (a.steps) cfg.budget_steps = *a.steps;
  if (a.seed) cfg.seed = *a.seed;
  if (a.scenarios) cfg.eval_scenarios = *a.scenarios;
  if (!a.out.empty()) cfg.out_dir = a.out;
  cfg.validate();
  return cfg;
}

std::string fmt(double v, const char* spec = "%.6f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

void write_config(const RunConfig& cfg, const std::filesystem::path& dir) {
  std::ofstream out(dir / "config.ini", std::ios::binary | std::ios::trunc);
  out << serialize_config(cfg);
}

void print_summary(std::ostream& out, const std::string& method, const PolicyEvaluation& e) {
  out << method << ": scenarios " << e.scenarios << " mean objective " << fmt(e.mean_policy)
      << " oracle " << fmt(e.mean_oracle) << " regret " << fmt(e.regret) << " match rate "
      << fmt(e.match_rate, "%.3f") << '\n';
}

void check_inputs(const PolicyParameters& params, const EnvConfig& env) {
  const int inputs = ScenarioState::kFeaturesPerCell * env.topology.rows * env.topology.cols;
  if (params.arch.inputs != inputs)
    throw DataError("checkpoint expects " + std::to_string(params.arch.inputs) +
                    " inputs, the configured layout gives " + std::to_string(inputs));
}

int cmd_train(const Args& a, std::ostream& out) {
  const RunConfig cfg = base_config(a);
  const AgentKind kind = parse_agent_kind(a.agent);
  const auto result = train(cfg.env, train_options(cfg, kind));
  const std::filesystem::path dir = cfg.out_dir;
  std::filesystem::create_directories(dir);
  save_checkpoint({result.params, cfg.seed}, dir / "checkpoint.ckpt");
  write_training_curve(dir / "training_curve.csv", result.curve);
  write_config(cfg, dir);
  out << "trained " << to_string(kind) << " for " << result.steps << " steps";
  if (!result.curve.empty()) out << ", final mean reward " << fmt(result.curve.back().mean_reward);
  out << "\nwrote " << (dir / "checkpoint.ckpt").string() << '\n';
  return kExitOk;
}

int cmd_eval(const Args& a, std::ostream& out) {
  const RunConfig cfg = base_config(a);
  const Checkpoint ck = load_checkpoint(a.checkpoint);
  check_inputs(ck.params, cfg.env);
  const auto seeds = held_out_seeds(cfg);
  ParametricPolicy policy(ck.params);
  std::vector<MethodEvaluation> methods;
  methods.push_back({policy.name(), evaluate_policy(policy, seeds, cfg.env)});
  methods.push_back({"oracle", evaluate_policy(OraclePolicy{}, seeds, cfg.env)});
  export_evaluation(cfg.out_dir, methods, 0);
  write_config(cfg, cfg.out_dir);
  print_summary(out, methods[0].method, methods[0].eval);
  return kExitOk;
}

int cmd_oracle(const Args& a, std::ostream& out) {
  const RunConfig cfg = base_config(a);
  const auto state = ScenarioState::reset(cfg.env, cfg.seed);
  const auto report = enumerate_shutdowns(state);
  out << "scenario seed " << cfg.seed << ", " << state.active_count() << " active cells, "
      << state.total_ues() << " UEs\n";
  out << "cell,objective,g_perf,p_gain,violations\n";
  for (const auto& e : report.entries)
    out << e.cell << ',' << fmt(e.value) << ',' << fmt(e.g_perf) << ',' << fmt(e.p_gain) << ','
        << e.violations.to_string() << '\n';
  out << "best cell " << report.best_cell << " objective " << fmt(report.best_value) << '\n';
  return kExitOk;
}

int cmd_ingest(const Args& a, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = base_config(a);
  const Checkpoint ck = load_checkpoint(a.checkpoint);
  check_inputs(ck.params, cfg.env);
  ParametricPolicy policy(ck.params);
  const auto snaps = read_kpi_csv(a.csv);
  auto layout = std::make_shared<const NetworkLayout>(cfg.env.build_layout());

  const std::filesystem::path dir = cfg.out_dir;
  std::filesystem::create_directories(dir);
  const auto path = dir / "ingest.csv";
  std::ofstream csv(path, std::ios::binary | std::ios::trunc);
  if (!csv) throw std::runtime_error("cannot write " + path.string());
  const auto& cols = csv_schema("ingest.csv");
  for (std::size_t i = 0; i < cols.size(); ++i) csv << (i ? "," : "") << cols[i];
  csv << '\n';

  int scored = 0, matches = 0;
  for (std::size_t i = 0; i < snaps.size(); ++i) {
    const auto state = snapshot_to_state(snaps[i], cfg.env, layout,
                                         derive_seed(cfg.seed, 41, i), a.redistribute);
    if (state.active_count() < 2) {
      err << "skipping snapshot " << snaps[i].timestamp << ": fewer than two active cells\n";
      continue;
    }
    Rng rng(derive_seed(cfg.seed, 42, i));
    const int action = policy.act(state, rng);
    const auto report = enumerate_shutdowns(state);
    ScenarioState copy = state;
    const auto step = copy.step(action);
    const ShutdownOutcome& o = *step.outcome;
    csv << snaps[i].timestamp << ',' << action << ',' << format_number(step.reward) << ','
        << report.best_cell << ',' << format_number(report.best_value) << ','
        << format_number(o.g_perf) << ',' << format_number(o.p_gain) << ','
        << o.violations.to_string() << '\n';
    ++scored;
    if (step.reward >= report.best_value - 1e-12 * std::max(1.0, std::abs(report.best_value)))
      ++matches;
  }
  csv.flush();
  if (!csv) throw std::runtime_error("write failed for " + path.string());
  out << "scored " << scored << " snapshots, policy matched the oracle on " << matches
      << "\nwrote " << path.string() << '\n';
  return kExitOk;
}

int cmd_compare(const Args& a, std::ostream& out) {
  const RunConfig cfg = base_config(a);
  const auto result = run_compare(cfg);
  export_compare(result, cfg, cfg.out_dir);
  for (const auto& run : result.runs) print_summary(out, to_string(run.kind), run.eval);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cell sleep-mode simulator and RL harness"};
  app.name("cellsleep");
  app.require_subcommand(1);
  Args a;

  auto* train_cmd = app.add_subcommand("train", "train an agent and save its checkpoint");
  train_cmd->add_option("--config", a.config, "INI config file");
  train_cmd->add_option("--agent", a.agent, "ppo, sarsa or random")
      ->required()
      ->check(CLI::IsMember({"ppo", "sarsa", "random"}));
  train_cmd->add_option("--steps", a.steps, "environment step budget");
  train_cmd->add_option("--seed", a.seed, "run seed");
  train_cmd->add_option("--out", a.out, "output directory");

  auto* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint against the oracle");
  eval_cmd->add_option("--checkpoint", a.checkpoint, "checkpoint file")->required();
  eval_cmd->add_option("--config", a.config, "INI config file");
  eval_cmd->add_option("--scenarios", a.scenarios, "number of held-out scenarios");
  eval_cmd->add_option("--seed", a.seed, "run seed");
  eval_cmd->add_option("--out", a.out, "output directory");

  auto* oracle_cmd = app.add_subcommand("oracle", "score every single-cell shutdown");
  oracle_cmd->add_option("--config", a.config, "INI config file");
  oracle_cmd->add_option("--seed", a.seed, "scenario seed");

  auto* ingest_cmd = app.add_subcommand("ingest", "run a checkpoint over a KPI CSV");
  ingest_cmd->add_option("--csv", a.csv, "per-cell KPI CSV")->required();
  ingest_cmd->add_option("--checkpoint", a.checkpoint, "checkpoint file")->required();
  ingest_cmd->add_option("--config", a.config, "INI config file");
  ingest_cmd->add_option("--seed", a.seed, "seed for synthetic UE handover");
  ingest_cmd->add_option("--out", a.out, "output directory");
  ingest_cmd->add_flag("--redistribute", a.redistribute,
                       "split each shut cell's load into UEs and hand them over");

  auto* compare_cmd = app.add_subcommand("compare", "train and evaluate ppo, sarsa and random");
  compare_cmd->add_option("--config", a.config, "INI config file");
  compare_cmd->add_option("--steps", a.steps, "environment step budget per agent");
  compare_cmd->add_option("--seed", a.seed, "run seed");
  compare_cmd->add_option("--scenarios", a.scenarios, "number of held-out scenarios");
  compare_cmd->add_option("--out", a.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*train_cmd) return cmd_train(a, out);
    if (*eval_cmd) return cmd_eval(a, out);
    if (*oracle_cmd) return cmd_oracle(a, out);
    if (*ingest_cmd) return cmd_ingest(a, out, err);
    if (*compare_cmd) return cmd_compare(a, out);
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace cellsleep
