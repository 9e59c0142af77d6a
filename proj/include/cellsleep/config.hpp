// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "cellsleep/env.hpp"
#include "cellsleep/ppo.hpp"
#include "cellsleep/sarsa.hpp"

namespace cellsleep {

struct RunConfig {
  EnvConfig env;
  PpoHyper ppo;
  SarsaHyper sarsa;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  std::int64_t budget_steps = 200000;
  int eval_scenarios = 20;

  void validate() const;  // throws ConfigError naming the offending key
  bool operator==(const RunConfig&) const = default;
};

/// Parses INI-style text ("[section]" headers, "key = value" lines, ';' or
/// '#' comments). Missing keys keep their defaults, unknown keys are errors.
/// radio.noise_dbm follows radio.prb_bandwidth_hz and radio.noise_figure_db,
/// and power.p_prb_w follows p_max_w / prb_capacity, unless given explicitly.
RunConfig parse_config(const std::string& text);

RunConfig load_config(const std::filesystem::path& path);

/// Writes every key, doubles with round-trip precision.
std::string serialize_config(const RunConfig& config);

}  // namespace cellsleep
