// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

#include "cellsleep/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <system_error>
#include <vector>

#include "cellsleep/errors.hpp"

namespace cellsleep {
namespace {

namespace pt = boost::property_tree;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  T v{};
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty())
    throw ConfigError(key, "not a valid number: '" + text + "'");
  return v;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError(key, "not a boolean: '" + text + "'");
}

std::vector<int> parse_int_list(const std::string& key, const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(parse_number<int>(key, tok));
  if (out.empty()) throw ConfigError(key, "empty list");
  return out;
}

struct Field {
  std::string section;
  std::string key;
  std::function<void(RunConfig&, const std::string& full_key, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

// Accessor returns a reference into the config; the same lambda serves both
// directions.
template <class Acc>
Field double_field(std::string sec, std::string key, Acc acc) {
  return {sec, key,
          [acc](RunConfig& c, const std::string& k, const std::string& v) {
            acc(c) = parse_number<double>(k, v);
          },
          [acc](const RunConfig& c) {
            return format_double(acc(const_cast<RunConfig&>(c)));
          }};
}

template <class T, class Acc>
Field int_field(std::string sec, std::string key, Acc acc) {
  return {sec, key,
          [acc](RunConfig& c, const std::string& k, const std::string& v) {
            acc(c) = parse_number<T>(k, v);
          },
          [acc](const RunConfig& c) {
            return std::to_string(acc(const_cast<RunConfig&>(c)));
          }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      int_field<int>("topology", "rows", [](RunConfig& c) -> int& { return c.env.topology.rows; }),
      int_field<int>("topology", "cols", [](RunConfig& c) -> int& { return c.env.topology.cols; }),
      double_field("topology", "inter_site_distance",
                   [](RunConfig& c) -> double& { return c.env.topology.inter_site_distance; }),
      int_field<int>("topology", "neighbors",
                     [](RunConfig& c) -> int& { return c.env.topology.neighbor_count; }),
      double_field("topology", "cell_radius",
                   [](RunConfig& c) -> double& { return c.env.topology.cell_radius; }),

      double_field("radio", "ptx_dbm", [](RunConfig& c) -> double& { return c.env.radio.ptx_dbm; }),
      double_field("radio", "carrier_ghz",
                   [](RunConfig& c) -> double& { return c.env.radio.carrier_ghz; }),
      double_field("radio", "h_bs", [](RunConfig& c) -> double& { return c.env.radio.h_bs; }),
      double_field("radio", "h_ut", [](RunConfig& c) -> double& { return c.env.radio.h_ut; }),
      double_field("radio", "prb_bandwidth_hz",
                   [](RunConfig& c) -> double& { return c.env.radio.prb_bandwidth_hz; }),
      double_field("radio", "noise_dbm", [](RunConfig& c) -> double& { return c.env.radio.noise_dbm; }),
      double_field("radio", "interference_alpha",
                   [](RunConfig& c) -> double& { return c.env.radio.interference_alpha; }),

      double_field("power", "p_idle_w", [](RunConfig& c) -> double& { return c.env.power.p_idle_w; }),
      double_field("power", "p_prb_w", [](RunConfig& c) -> double& { return c.env.power.p_prb_w; }),
      double_field("power", "eta", [](RunConfig& c) -> double& { return c.env.power.eta; }),
      double_field("power", "p_max_w", [](RunConfig& c) -> double& { return c.env.power.p_max_w; }),
      int_field<int>("power", "prb_capacity",
                     [](RunConfig& c) -> int& { return c.env.power.prb_capacity; }),
      int_field<int>("power", "prb_floor", [](RunConfig& c) -> int& { return c.env.power.prb_floor; }),

      int_field<int>("traffic", "ues", [](RunConfig& c) -> int& { return c.env.traffic.ues; }),
      double_field("traffic", "demand_min_bps",
                   [](RunConfig& c) -> double& { return c.env.traffic.demand_min_bps; }),
      double_field("traffic", "demand_max_bps",
                   [](RunConfig& c) -> double& { return c.env.traffic.demand_max_bps; }),

      double_field("objective", "w_perf", [](RunConfig& c) -> double& { return c.env.objective.w_perf; }),
      double_field("objective", "w_power",
                   [](RunConfig& c) -> double& { return c.env.objective.w_power; }),
      double_field("objective", "delta", [](RunConfig& c) -> double& { return c.env.objective.delta; }),
      double_field("objective", "interference_factor",
                   [](RunConfig& c) -> double& { return c.env.objective.interference_factor; }),
      double_field("objective", "gain_alpha",
                   [](RunConfig& c) -> double& { return c.env.objective.gain_alpha; }),
      double_field("objective", "penalty",
                   [](RunConfig& c) -> double& { return c.env.objective.penalty; }),

      {"handover", "enabled",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.env.handover.enabled = parse_bool(k, v);
       },
       [](const RunConfig& c) { return std::string(c.env.handover.enabled ? "true" : "false"); }},
      double_field("handover", "epsilon_m2",
                   [](RunConfig& c) -> double& { return c.env.handover.epsilon_m2; }),
      {"handover", "weighting",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         const std::string s = trim(v);
         if (s == "load")
           c.env.handover.weighting = HandoverWeighting::Load;
         else if (s == "available_prbs")
           c.env.handover.weighting = HandoverWeighting::AvailablePrbs;
         else
           throw ConfigError(k, "expected load or available_prbs");
       },
       [](const RunConfig& c) {
         return std::string(c.env.handover.weighting == HandoverWeighting::Load ? "load"
                                                                                : "available_prbs");
       }},
      double_field("handover", "a3_offset_db",
                   [](RunConfig& c) -> double& { return c.env.handover.a3_offset_db; }),

      int_field<int>("env", "horizon", [](RunConfig& c) -> int& { return c.env.horizon; }),
      {"env", "family",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         const std::string s = trim(v);
         if (s == "uniform")
           c.env.family = ScenarioFamily::Uniform;
         else if (s == "planted")
           c.env.family = ScenarioFamily::Planted;
         else
           throw ConfigError(k, "expected uniform or planted");
       },
       [](const RunConfig& c) {
         return std::string(c.env.family == ScenarioFamily::Uniform ? "uniform" : "planted");
       }},

      double_field("ppo", "learning_rate", [](RunConfig& c) -> double& { return c.ppo.learning_rate; }),
      int_field<int>("ppo", "batch_size", [](RunConfig& c) -> int& { return c.ppo.batch_size; }),
      double_field("ppo", "gamma", [](RunConfig& c) -> double& { return c.ppo.gamma; }),
      double_field("ppo", "gae_lambda", [](RunConfig& c) -> double& { return c.ppo.gae_lambda; }),
      double_field("ppo", "clip_epsilon", [](RunConfig& c) -> double& { return c.ppo.clip_epsilon; }),
      double_field("ppo", "value_coeff", [](RunConfig& c) -> double& { return c.ppo.value_coeff; }),
      double_field("ppo", "entropy_coeff", [](RunConfig& c) -> double& { return c.ppo.entropy_coeff; }),
      int_field<int>("ppo", "epochs_per_batch",
                     [](RunConfig& c) -> int& { return c.ppo.epochs_per_batch; }),
      int_field<int>("ppo", "rollout_length", [](RunConfig& c) -> int& { return c.ppo.rollout_length; }),
      {"ppo", "hidden",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.ppo.hidden = parse_int_list(k, v);
       },
       [](const RunConfig& c) {
         std::string s;
         for (std::size_t i = 0; i < c.ppo.hidden.size(); ++i)
           s += (i ? "," : "") + std::to_string(c.ppo.hidden[i]);
         return s;
       }},

      double_field("sarsa", "learning_rate", [](RunConfig& c) -> double& { return c.sarsa.learning_rate; }),
      double_field("sarsa", "gamma", [](RunConfig& c) -> double& { return c.sarsa.gamma; }),
      double_field("sarsa", "epsilon_start", [](RunConfig& c) -> double& { return c.sarsa.epsilon_start; }),
      double_field("sarsa", "epsilon_end", [](RunConfig& c) -> double& { return c.sarsa.epsilon_end; }),

      int_field<std::uint64_t>("run", "seed", [](RunConfig& c) -> std::uint64_t& { return c.seed; }),
      {"run", "out_dir",
       [](RunConfig& c, const std::string&, const std::string& v) { c.out_dir = trim(v); },
       [](const RunConfig& c) { return c.out_dir; }},
      int_field<std::int64_t>("run", "budget_steps",
                              [](RunConfig& c) -> std::int64_t& { return c.budget_steps; }),
      int_field<int>("run", "eval_scenarios", [](RunConfig& c) -> int& { return c.eval_scenarios; }),
  };
  return table;
}

}  // namespace

void RunConfig::validate() const {
  env.validate();
  ppo.validate();
  sarsa.validate();
  if (out_dir.empty()) throw ConfigError("run.out_dir", "must not be empty");
  if (budget_steps < 0) throw ConfigError("run.budget_steps", "must be >= 0");
  if (eval_scenarios < 1) throw ConfigError("run.eval_scenarios", "must be >= 1");
}

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("line " + std::to_string(e.line()), e.message());
  }

  std::map<std::string, const Field*> index;
  for (const Field& f : fields()) index[f.section + "." + f.key] = &f;

  RunConfig cfg;
  std::set<std::string> given;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ConfigError(section, "keys must live inside a [section]");
    for (const auto& [key, node] : body) {
      const std::string full = section + "." + key;
      auto it = index.find(full);
      if (it == index.end()) throw ConfigError(full, "unknown key");
      it->second->set(cfg, full, node.data());
      given.insert(full);
    }
  }

  if (!given.contains("radio.noise_dbm"))
    cfg.env.radio.noise_dbm = thermal_noise_dbm(cfg.env.radio.prb_bandwidth_hz, 9.0);
  if (!given.contains("power.p_prb_w") && cfg.env.power.prb_capacity > 0)
    cfg.env.power.p_prb_w = cfg.env.power.p_max_w / cfg.env.power.prb_capacity;

  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("file", "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& config) {
  std::ostringstream out;
  std::string section;
  for (const Field& f : fields()) {
    if (f.section != section) {
      if (!section.empty()) out << '\n';
      section = f.section;
      out << '[' << section << "]\n";
    }
    out << f.key << " = " << f.get(config) << '\n';
  }
  return out.str();
}

}  // namespace cellsleep
