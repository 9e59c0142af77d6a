// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cellsleep/radio.hpp"
#include "cellsleep/rng.hpp"
#include "cellsleep/topology.hpp"

namespace cellsleep {

enum class ScenarioFamily {
  Uniform,  // UEs dropped uniformly in the discs of uniformly chosen sites
  Planted,  // one empty cell that is the strongest interferer for every UE
};

enum class HandoverWeighting {
  Load,           // xi_i = PRBs in use at i * lambda_i
  AvailablePrbs,  // xi_i = free PRBs at i * lambda_i
};

struct TopologyParams {
  int rows = 4;
  int cols = 3;
  double inter_site_distance = 500.0;
  int neighbor_count = 4;
  double cell_radius = 250.0;  // UE placement radius, not a coverage cutoff
  bool operator==(const TopologyParams&) const = default;
};

struct PowerParams {
  double p_idle_w = 100.0;
  double p_prb_w = 0.4;  // p_max_w / prb_capacity
  double eta = 0.3;
  double p_max_w = 40.0;
  int prb_capacity = 100;
  int prb_floor = 10;  // signaling PRBs counted in every active cell's load

  void validate() const;
  bool operator==(const PowerParams&) const = default;
};

struct TrafficParams {
  int ues = 40;
  double demand_min_bps = 0.01e9;
  double demand_max_bps = 0.1e9;
  bool operator==(const TrafficParams&) const = default;
};

struct ObjectiveParams {
  double w_perf = 0.4;
  double w_power = 0.6;
  double delta = 0.9;
  double interference_factor = 1.1;  // I_threshold = factor * I_before
  double gain_alpha = 1e7;           // bit/s, smooths the throughput gain ratio
  double penalty = 1.0;
  bool operator==(const ObjectiveParams&) const = default;
};

struct HandoverParams {
  bool enabled = true;  // false drops the UEs of a shut cell (test variant)
  double epsilon_m2 = 1.0;
  HandoverWeighting weighting = HandoverWeighting::Load;
  double a3_offset_db = 3.0;
  bool operator==(const HandoverParams&) const = default;
};

struct EnvConfig {
  TopologyParams topology;
  RadioConstants radio;
  PowerParams power;
  TrafficParams traffic;
  ObjectiveParams objective;
  HandoverParams handover;
  int horizon = 1;
  ScenarioFamily family = ScenarioFamily::Uniform;

  void validate() const;
  NetworkLayout build_layout() const;
  bool operator==(const EnvConfig&) const = default;
};

inline constexpr int kNoCell = -1;

struct UeSession {
  int ue_id = 0;
  Point position;
  double r_demand = 0.0;   // bit/s
  int serving_cell = kNoCell;
  double rsrp_dbm = 0.0;
  double sinr = 0.0;        // linear
  std::int64_t prb_demand = 0;
  std::int64_t prbs = 0;
  double throughput = 0.0;  // bit/s
  double interference = 0.0;  // mW
};

struct CellAggregates {
  int cell_id = 0;
  bool active = false;
  int n_ues = 0;
  double avg_thp = 0.0;
  double tot_thp = 0.0;
  std::int64_t tot_prbs = 0;  // UE PRBs plus the signaling floor
  double tot_interference = 0.0;
  double power_w = 0.0;
  double ee = 0.0;  // bit/s per watt
  bool overloaded = false;
};

struct NetworkSummary {
  double p_avrg = 0.0;
  double r_avrg = 0.0;
  double prb_avg = 0.0;
  double ee_total = 0.0;
  double tot_interference = 0.0;
  int active_cells = 0;
  std::vector<CellAggregates> per_cell;
};

enum class Violation : std::uint8_t {
  ThroughputDegradation = 1,
  PrbIncrease = 2,
  InterferenceExceeded = 4,
};

class ViolationSet {
 public:
  ViolationSet() = default;
  void insert(Violation v) { bits_ |= static_cast<std::uint8_t>(v); }
  bool contains(Violation v) const {
    return (bits_ & static_cast<std::uint8_t>(v)) != 0;
  }
  int size() const;
  bool empty() const { return bits_ == 0; }
  std::uint8_t bits() const { return bits_; }
  std::string to_string() const;  // "a|b", "" when empty
  bool operator==(const ViolationSet&) const = default;

 private:
  std::uint8_t bits_ = 0;
};

struct ShutdownOutcome {
  int shut_cell = kNoCell;
  NetworkSummary before;
  NetworkSummary after;
  double g_perf = 0.0;
  double p_gain = 0.0;
  ViolationSet violations;
  double reward = 0.0;
  int moved_ues = 0;
  int a3_satisfied = 0;  // moved UEs whose target beats the old cell by the A3 offset
};

struct HandoverWeights {
  std::vector<int> cells;  // ascending id
  std::vector<double> probabilities;
};

struct StepResult {
  std::vector<double> observation;
  double reward = 0.0;
  bool done = false;
  bool valid = false;
  std::optional<ShutdownOutcome> outcome;
};

struct UePlacement {
  Point position;
  double r_demand = 0.0;
};

/// Per-cell aggregates supplied directly (offline KPI snapshots).
struct CellLoad {
  int n_ues = 0;
  std::int64_t prbs = 0;
  double tot_thp = 0.0;
  double tot_interference = 0.0;
  bool active = true;
};

double cell_power(std::int64_t tot_prbs, const PowerParams& pp, bool active);

/// Mean over cells active after the shutdown of
/// (R_after - R_before) / (R_before + gain_alpha).
double performance_gain(const NetworkSummary& before,
                        const NetworkSummary& after, double gain_alpha);

double power_gain(const NetworkSummary& before, const NetworkSummary& after,
                  double p_max);

ViolationSet evaluate_constraints(const NetworkSummary& before,
                                  const NetworkSummary& after, double delta,
                                  double interference_factor);

double reward(const ShutdownOutcome& outcome, double w_perf, double w_power,
              double penalty);

/// Mutable simulation state for one scenario. Copying is cheap (layout is
/// shared) and yields a fully independent world.
class ScenarioState {
 public:
  static constexpr int kFeaturesPerCell = 5;

  /// Fresh scenario: all cells active, UEs placed and admitted by max RSRP.
  static ScenarioState reset(const EnvConfig& config, std::uint64_t seed);

  static ScenarioState from_placements(
      const EnvConfig& config, std::shared_ptr<const NetworkLayout> layout,
      std::span<const UePlacement> ues, std::uint64_t seed);

  /// Aggregate mode: per-cell quantities are taken as given. With
  /// `synthesize_ues`, a shut cell's load is split into n_ues equal shares
  /// that are handed over; otherwise its load leaves the network.
  static ScenarioState from_aggregates(
      const EnvConfig& config, std::shared_ptr<const NetworkLayout> layout,
      std::span<const CellLoad> cells, std::uint64_t seed,
      bool synthesize_ues);

  const EnvConfig& config() const { return config_; }
  const NetworkLayout& layout() const { return *layout_; }
  std::shared_ptr<const NetworkLayout> shared_layout() const { return layout_; }
  std::uint64_t seed() const { return seed_; }
  int num_cells() const { return layout_->size(); }
  int active_count() const;
  std::span<const std::uint8_t> active() const { return active_; }
  bool is_active(int cell_id) const;
  const std::vector<UeSession>& ues() const { return ues_; }
  int total_ues() const { return total_ues_; }
  int step_count() const { return step_count_; }
  bool aggregate_mode() const { return aggregate_mode_; }
  std::optional<int> planted_cell() const { return planted_cell_; }

  /// Active cell with the highest RSRP at the point, ties to the lower id.
  /// Throws NoCoverage when no cell is active.
  int admit_ue(Point ue) const;

  /// Recomputes PRB allocations of one cell (demand, then capacity scaling).
  void allocate_cell(int cell_id);

  CellAggregates cell_aggregates(int cell_id) const;
  NetworkSummary network_summary() const;

  /// Sum of active-cell power maintained incrementally across updates.
  double total_power() const { return total_power_; }

  HandoverWeights handover_weights(int shut_cell) const;

  /// Deactivates the cell and hands its UEs over to neighbors by a
  /// multinomial draw over the handover weights.
  void redistribute_ues(int shut_cell, Rng& rng);

  ShutdownOutcome apply_shutdown(int cell_id, Rng& rng);

  /// The random stream a shutdown of `cell_id` uses at the current step.
  Rng shutdown_stream(int cell_id) const;

  std::vector<double> observe() const;
  int observation_size() const { return kFeaturesPerCell * num_cells(); }

  StepResult step(int action);

 private:
  ScenarioState(const EnvConfig& config,
                std::shared_ptr<const NetworkLayout> layout,
                std::uint64_t seed);

  void link_ue(UeSession& ue) const;
  void refresh();
  void update_cache(int cell_id);
  CellAggregates compute_aggregates(int cell_id) const;
  void redistribute_aggregate(int shut_cell, const HandoverWeights& weights,
                              Rng& rng);
  void place_uniform(Rng& rng);
  void place_planted(Rng& rng);

  EnvConfig config_;
  std::shared_ptr<const NetworkLayout> layout_;
  std::uint64_t seed_ = 0;
  std::vector<std::uint8_t> active_;
  std::vector<UeSession> ues_;
  int total_ues_ = 0;
  std::vector<CellAggregates> cache_;
  std::vector<std::uint8_t> overloaded_;
  double total_power_ = 0.0;
  double interference_norm_ = 1.0;
  int step_count_ = 0;
  std::optional<int> planted_cell_;

  bool aggregate_mode_ = false;
  bool synthesize_ues_ = false;
  std::vector<CellLoad> loads_;
};

}  // namespace cellsleep
