// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

// Power, gain, constraint and reward arithmetic over network summaries, plus
// config validation for the environment parameters.

#include <bit>
#include <cmath>

#include "cellsleep/env.hpp"
#include "cellsleep/errors.hpp"

namespace cellsleep {

void PowerParams::validate() const {
  if (!(p_idle_w > 0.0)) throw ConfigError("power.p_idle_w", "must be > 0");
  if (!(p_prb_w > 0.0)) throw ConfigError("power.p_prb_w", "must be > 0");
  if (!(eta > 0.0 && eta <= 1.0))
    throw ConfigError("power.eta", "must be in (0, 1]");
  if (!(p_max_w > 0.0)) throw ConfigError("power.p_max_w", "must be > 0");
  if (prb_capacity < 1) throw ConfigError("power.prb_capacity", "must be >= 1");
  if (prb_floor < 0) throw ConfigError("power.prb_floor", "must be >= 0");
  if (prb_floor > prb_capacity)
    throw ConfigError("power.prb_floor", "must not exceed prb_capacity");
}

void EnvConfig::validate() const {
  const auto& t = topology;
  if (t.rows < 1 || t.cols < 1 || t.rows * t.cols < 2)
    throw ConfigError("topology.rows", "grid needs rows*cols >= 2");
  if (!(t.inter_site_distance > 0.0))
    throw ConfigError("topology.inter_site_distance", "must be > 0");
  if (t.neighbor_count < 1)
    throw ConfigError("topology.neighbors", "must be >= 1");
  if (!(t.cell_radius > 0.0))
    throw ConfigError("topology.cell_radius", "must be > 0");
  radio.validate();
  power.validate();
  if (traffic.ues < 1) throw ConfigError("traffic.ues", "must be >= 1");
  if (!(traffic.demand_min_bps >= 0.0))
    throw ConfigError("traffic.demand_min_bps", "must be >= 0");
  if (!(traffic.demand_max_bps >= traffic.demand_min_bps))
    throw ConfigError("traffic.demand_max_bps", "must be >= demand_min_bps");
  const auto& o = objective;
  if (!(o.w_perf >= 0.0)) throw ConfigError("objective.w_perf", "must be >= 0");
  if (!(o.w_power >= 0.0))
    throw ConfigError("objective.w_power", "must be >= 0");
  if (!(o.delta >= 0.0 && o.delta <= 1.0))
    throw ConfigError("objective.delta", "must be in [0, 1]");
  if (!(o.interference_factor > 0.0))
    throw ConfigError("objective.interference_factor", "must be > 0");
  if (!(o.gain_alpha >= 0.0))
    throw ConfigError("objective.gain_alpha", "must be >= 0");
  if (!(o.penalty >= 0.0)) throw ConfigError("objective.penalty", "must be >= 0");
  if (!(handover.epsilon_m2 > 0.0))
    throw ConfigError("handover.epsilon_m2", "must be > 0");
  if (!std::isfinite(handover.a3_offset_db))
    throw ConfigError("handover.a3_offset_db", "not finite");
  if (horizon < 1) throw ConfigError("env.horizon", "must be >= 1");
}

NetworkLayout EnvConfig::build_layout() const {
  return build_grid_layout(topology.rows, topology.cols,
                           topology.inter_site_distance,
                           topology.neighbor_count);
}

int ViolationSet::size() const { return std::popcount(bits_); }

std::string ViolationSet::to_string() const {
  std::string out;
  auto add = [&](Violation v, const char* name) {
    if (!contains(v)) return;
    if (!out.empty()) out += '|';
    out += name;
  };
  add(Violation::ThroughputDegradation, "throughput_degradation");
  add(Violation::PrbIncrease, "prb_increase");
  add(Violation::InterferenceExceeded, "interference_exceeded");
  return out;
}

double cell_power(std::int64_t tot_prbs, const PowerParams& pp, bool active) {
  if (!active) return 0.0;
  return pp.p_idle_w + static_cast<double>(tot_prbs) * pp.p_prb_w / pp.eta;
}

double performance_gain(const NetworkSummary& before,
                        const NetworkSummary& after, double gain_alpha) {
  double sum = 0.0;
  int survivors = 0;
  for (std::size_t k = 0; k < after.per_cell.size(); ++k) {
    const auto& a = after.per_cell[k];
    if (!a.active) continue;
    const auto& b = before.per_cell.at(k);
    sum += (a.avg_thp - b.avg_thp) / (b.avg_thp + gain_alpha);
    ++survivors;
  }
  return survivors > 0 ? sum / survivors : 0.0;
}

double power_gain(const NetworkSummary& before, const NetworkSummary& after,
                  double p_max) {
  return (before.p_avrg - after.p_avrg) / p_max;
}

ViolationSet evaluate_constraints(const NetworkSummary& before,
                                  const NetworkSummary& after, double delta,
                                  double interference_factor) {
  ViolationSet v;
  if (!(after.r_avrg >= delta * before.r_avrg))
    v.insert(Violation::ThroughputDegradation);
  if (!(after.prb_avg <= before.prb_avg)) v.insert(Violation::PrbIncrease);
  if (!(after.tot_interference <=
        interference_factor * before.tot_interference))
    v.insert(Violation::InterferenceExceeded);
  return v;
}

double reward(const ShutdownOutcome& outcome, double w_perf, double w_power,
              double penalty) {
  return w_perf * outcome.g_perf + w_power * outcome.p_gain -
         penalty * outcome.violations.size();
}

}  // namespace cellsleep
