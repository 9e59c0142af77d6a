// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

#include "cellsleep/env.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cellsleep/errors.hpp"

namespace cellsleep {

namespace {

// Keeps capacity scaling (demand * capacity) inside 64-bit range.
constexpr std::int64_t kMaxPrbDemand = 1'000'000'000'000;

// Stream tags for derive_seed.
constexpr std::uint64_t kPlacementStream = 1;
constexpr std::uint64_t kShutdownStream = 2;

}  // namespace

ScenarioState::ScenarioState(const EnvConfig& config,
                             std::shared_ptr<const NetworkLayout> layout,
                             std::uint64_t seed)
    : config_(config), layout_(std::move(layout)), seed_(seed) {
  const int k = layout_->size();
  active_.assign(k, 1);
  cache_.resize(k);
  for (int i = 0; i < k; ++i) cache_[i].cell_id = i;
  overloaded_.assign(k, 0);
}

ScenarioState ScenarioState::reset(const EnvConfig& config, std::uint64_t seed) {
  config.validate();
  ScenarioState s(config,
                  std::make_shared<const NetworkLayout>(config.build_layout()),
                  seed);
  Rng rng(derive_seed(seed, kPlacementStream));
  if (config.family == ScenarioFamily::Planted)
    s.place_planted(rng);
  else
    s.place_uniform(rng);
  s.refresh();
  double norm = 0.0;
  for (const auto& c : s.cache_) norm = std::max(norm, c.tot_interference);
  s.interference_norm_ = norm > 0.0 ? norm : 1.0;
  return s;
}

ScenarioState ScenarioState::from_placements(
    const EnvConfig& config, std::shared_ptr<const NetworkLayout> layout,
    std::span<const UePlacement> ues, std::uint64_t seed) {
  if (!layout || layout->size() < 1)
    throw ConfigError("topology", "layout has no cells");
  if (ues.empty()) throw ConfigError("traffic.ues", "no UEs");
  ScenarioState s(config, std::move(layout), seed);
  for (const auto& p : ues) {
    if (!(p.r_demand >= 0.0))
      throw ConfigError("traffic", "negative UE demand");
    UeSession ue;
    ue.ue_id = static_cast<int>(s.ues_.size());
    ue.position = p.position;
    ue.r_demand = p.r_demand;
    ue.serving_cell = s.admit_ue(p.position);
    s.ues_.push_back(ue);
  }
  s.total_ues_ = static_cast<int>(s.ues_.size());
  s.refresh();
  double norm = 0.0;
  for (const auto& c : s.cache_) norm = std::max(norm, c.tot_interference);
  s.interference_norm_ = norm > 0.0 ? norm : 1.0;
  return s;
}

ScenarioState ScenarioState::from_aggregates(
    const EnvConfig& config, std::shared_ptr<const NetworkLayout> layout,
    std::span<const CellLoad> cells, std::uint64_t seed, bool synthesize_ues) {
  if (!layout) throw ConfigError("topology", "missing layout");
  if (static_cast<int>(cells.size()) != layout->size())
    throw ConfigError("topology", "snapshot has " + std::to_string(cells.size()) +
                                      " cells, layout has " +
                                      std::to_string(layout->size()));
  ScenarioState s(config, std::move(layout), seed);
  s.aggregate_mode_ = true;
  s.synthesize_ues_ = synthesize_ues;
  s.loads_.assign(cells.begin(), cells.end());
  int total = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& c = cells[i];
    if (c.n_ues < 0 || c.prbs < 0 || c.tot_thp < 0.0 || c.tot_interference < 0.0)
      throw ConfigError("snapshot", "negative quantity in cell " +
                                        std::to_string(i));
    s.active_[i] = c.active ? 1 : 0;
    if (!c.active) s.loads_[i] = CellLoad{0, 0, 0.0, 0.0, false};
    total += s.loads_[i].n_ues;
  }
  if (s.active_count() == 0)
    throw ConfigError("snapshot", "no active cell");
  s.total_ues_ = total;
  s.refresh();
  double norm = 0.0;
  for (const auto& c : s.cache_) norm = std::max(norm, c.tot_interference);
  s.interference_norm_ = norm > 0.0 ? norm : 1.0;
  return s;
}

void ScenarioState::place_uniform(Rng& rng) {
  const auto& t = config_.traffic;
  const double radius = config_.topology.cell_radius;
  const int k = num_cells();
  for (int u = 0; u < t.ues; ++u) {
    const int site = static_cast<int>(rng.below(k));
    const double r = radius * std::sqrt(rng.uniform());
    const double theta = 2.0 * std::numbers::pi * rng.uniform();
    const Point c = layout_->site(site).position;
    UeSession ue;
    ue.ue_id = u;
    ue.position = {c.x + r * std::cos(theta), c.y + r * std::sin(theta)};
    ue.r_demand = rng.uniform(t.demand_min_bps, t.demand_max_bps);
    ue.serving_cell = admit_ue(ue.position);
    ues_.push_back(ue);
  }
  total_ues_ = t.ues;
}

// UEs sit between the planted cell and the cells around it, on the host side
// of the cell boundary, so the planted cell stays empty while being the
// strongest interferer each UE sees.
void ScenarioState::place_planted(Rng& rng) {
  const auto& t = config_.traffic;
  const int planted = static_cast<int>(rng.below(num_cells()));
  planted_cell_ = planted;
  const auto hosts = layout_->neighbors(planted);
  const Point target = layout_->site(planted).position;
  for (int u = 0; u < t.ues; ++u) {
    UeSession ue;
    ue.ue_id = u;
    for (;;) {
      const int host = hosts[rng.below(hosts.size())];
      const Point h = layout_->site(host).position;
      const double dx = target.x - h.x;
      const double dy = target.y - h.y;
      const double along = rng.uniform(0.15, 0.4);
      const double across = rng.uniform(-0.2, 0.2);
      ue.position = {h.x + along * dx - across * dy,
                     h.y + along * dy + across * dx};
      ue.serving_cell = admit_ue(ue.position);
      if (ue.serving_cell != planted) break;
    }
    ue.r_demand = rng.uniform(t.demand_min_bps, t.demand_max_bps);
    ues_.push_back(ue);
  }
  total_ues_ = t.ues;
}

int ScenarioState::active_count() const {
  return static_cast<int>(std::count(active_.begin(), active_.end(), 1));
}

bool ScenarioState::is_active(int cell_id) const {
  layout_->site(cell_id);
  return active_[cell_id] != 0;
}

int ScenarioState::admit_ue(Point ue) const {
  int best = kNoCell;
  double best_rsrp = 0.0;
  for (int k = 0; k < num_cells(); ++k) {
    if (!active_[k]) continue;
    const double p = rsrp(*layout_, k, ue, config_.radio);
    if (best == kNoCell || p > best_rsrp) {
      best = k;
      best_rsrp = p;
    }
  }
  if (best == kNoCell) throw NoCoverage("admit_ue: no active cell");
  return best;
}

void ScenarioState::link_ue(UeSession& ue) const {
  const auto& rc = config_.radio;
  ue.rsrp_dbm = rsrp(*layout_, ue.serving_cell, ue.position, rc);
  ue.interference =
      interference(*layout_, ue.serving_cell, ue.position, active_, rc);
  ue.sinr = sinr(ue.rsrp_dbm, ue.interference, rc);
  if (ue.r_demand > 0.0 && !(ue.sinr > 0.0)) {
    ue.prb_demand = kMaxPrbDemand;  // unreachable demand, saturates the cell
  } else {
    ue.prb_demand = std::min(prb_demand(ue.r_demand, ue.sinr, rc), kMaxPrbDemand);
  }
}

void ScenarioState::allocate_cell(int cell_id) {
  layout_->site(cell_id);
  if (aggregate_mode_) {
    update_cache(cell_id);
    return;
  }
  std::vector<UeSession*> members;
  for (auto& ue : ues_)
    if (ue.serving_cell == cell_id) members.push_back(&ue);

  const std::int64_t cap = config_.power.prb_capacity;
  const auto n = static_cast<std::int64_t>(members.size());
  std::int64_t sum = 0;
  for (auto* ue : members) sum += ue->prb_demand;

  overloaded_[cell_id] = 0;
  if (n > cap) {
    overloaded_[cell_id] = 1;
    for (std::int64_t i = 0; i < n; ++i) members[i]->prbs = i < cap ? 1 : 0;
  } else if (sum > cap) {
    std::int64_t total = 0;
    for (auto* ue : members) {
      std::int64_t a = ue->prb_demand * cap / sum;
      if (ue->prb_demand > 0) a = std::max<std::int64_t>(a, 1);
      ue->prbs = a;
      total += a;
    }
    // The one-PRB minimum can push the sum over capacity; take the excess
    // back from the largest allocations.
    while (total > cap) {
      UeSession* largest = nullptr;
      for (auto* ue : members)
        if (ue->prbs > 1 && (!largest || ue->prbs > largest->prbs)) largest = ue;
      if (!largest) break;
      --largest->prbs;
      --total;
    }
  } else {
    for (auto* ue : members) ue->prbs = ue->prb_demand;
  }
  for (auto* ue : members)
    ue->throughput = shannon_throughput(ue->prbs, ue->sinr, config_.radio);
  update_cache(cell_id);
}

CellAggregates ScenarioState::compute_aggregates(int cell_id) const {
  CellAggregates c;
  c.cell_id = cell_id;
  c.active = active_[cell_id] != 0;
  if (!c.active) return c;
  if (aggregate_mode_) {
    const auto& l = loads_[cell_id];
    c.n_ues = l.n_ues;
    c.tot_thp = l.tot_thp;
    c.tot_prbs = l.prbs;
    c.tot_interference = l.tot_interference;
    c.overloaded = l.prbs > config_.power.prb_capacity;
  } else {
    for (const auto& ue : ues_) {
      if (ue.serving_cell != cell_id) continue;
      ++c.n_ues;
      c.tot_thp += ue.throughput;
      c.tot_prbs += ue.prbs;
      c.tot_interference += ue.interference;
    }
    c.tot_prbs += config_.power.prb_floor;
    c.overloaded = overloaded_[cell_id] != 0;
  }
  c.avg_thp = c.n_ues > 0 ? c.tot_thp / c.n_ues : 0.0;
  c.power_w = cell_power(c.tot_prbs, config_.power, true);
  c.ee = c.avg_thp / c.power_w;
  return c;
}

void ScenarioState::update_cache(int cell_id) {
  CellAggregates fresh = compute_aggregates(cell_id);
  total_power_ += fresh.power_w - cache_[cell_id].power_w;
  cache_[cell_id] = std::move(fresh);
}

void ScenarioState::refresh() {
  if (!aggregate_mode_)
    for (auto& ue : ues_)
      if (ue.serving_cell != kNoCell) link_ue(ue);
  for (int k = 0; k < num_cells(); ++k) allocate_cell(k);
}

CellAggregates ScenarioState::cell_aggregates(int cell_id) const {
  layout_->site(cell_id);
  return compute_aggregates(cell_id);
}

NetworkSummary ScenarioState::network_summary() const {
  NetworkSummary s;
  s.per_cell.reserve(num_cells());
  double p = 0.0, r = 0.0, prb = 0.0;
  for (int k = 0; k < num_cells(); ++k) {
    s.per_cell.push_back(compute_aggregates(k));
    const auto& c = s.per_cell.back();
    if (!c.active) continue;
    ++s.active_cells;
    p += c.power_w;
    r += c.tot_thp;
    prb += static_cast<double>(c.tot_prbs);
    s.tot_interference += c.tot_interference;
  }
  if (s.active_cells == 0) throw NoCoverage("network_summary: no active cell");
  s.p_avrg = p / s.active_cells;
  s.r_avrg = r / s.active_cells;
  s.prb_avg = prb / s.active_cells;
  s.ee_total = s.r_avrg / s.p_avrg;
  return s;
}

HandoverWeights ScenarioState::handover_weights(int shut_cell) const {
  if (!is_active(shut_cell))
    throw IllegalAction("handover_weights: cell " + std::to_string(shut_cell) +
                        " is not active");
  HandoverWeights w;
  for (int i : layout_->neighbors(shut_cell))
    if (active_[i]) w.cells.push_back(i);
  if (w.cells.empty())
    for (int i = 0; i < num_cells(); ++i)
      if (active_[i] && i != shut_cell) w.cells.push_back(i);
  if (w.cells.empty())
    throw IllegalAction("handover_weights: no other active cell");
  std::sort(w.cells.begin(), w.cells.end());

  const Point origin = layout_->site(shut_cell).position;
  const std::int64_t floor = aggregate_mode_ ? 0 : config_.power.prb_floor;
  std::vector<double> lambda;
  double xi_sum = 0.0;
  for (int i : w.cells) {
    const double d = distance(layout_->site(i).position, origin);
    lambda.push_back(1.0 / (d * d + config_.handover.epsilon_m2));
    const std::int64_t ue_prbs = cache_[i].tot_prbs - floor;
    double load = static_cast<double>(cache_[i].tot_prbs);
    if (config_.handover.weighting == HandoverWeighting::AvailablePrbs)
      load = static_cast<double>(
          std::max<std::int64_t>(0, config_.power.prb_capacity - ue_prbs));
    w.probabilities.push_back(load * lambda.back());
    xi_sum += w.probabilities.back();
  }
  if (!(xi_sum > 0.0)) {
    w.probabilities = lambda;
    xi_sum = 0.0;
    for (double l : lambda) xi_sum += l;
  }
  for (double& p : w.probabilities) p /= xi_sum;
  return w;
}

void ScenarioState::redistribute_aggregate(int shut_cell,
                                           const HandoverWeights& weights,
                                           Rng& rng) {
  CellLoad gone = loads_[shut_cell];
  loads_[shut_cell] = CellLoad{0, 0, 0.0, 0.0, false};
  if (!synthesize_ues_ || gone.n_ues == 0) return;
  // Equal-demand synthetic UEs: PRBs split as evenly as integers allow.
  const auto counts = rng.multinomial(gone.n_ues, weights.probabilities);
  const std::int64_t cap = config_.power.prb_capacity;
  int ue = 0;
  for (std::size_t j = 0; j < weights.cells.size(); ++j) {
    auto& dst = loads_[weights.cells[j]];
    for (int c = 0; c < counts[j]; ++c, ++ue) {
      const std::int64_t want =
          gone.prbs / gone.n_ues + (ue < gone.prbs % gone.n_ues ? 1 : 0);
      const std::int64_t got =
          std::min(want, std::max<std::int64_t>(0, cap - dst.prbs));
      const double share = want > 0 ? static_cast<double>(got) / want : 1.0;
      dst.n_ues += 1;
      dst.prbs += got;
      dst.tot_thp += share * gone.tot_thp / gone.n_ues;
      dst.tot_interference += gone.tot_interference / gone.n_ues;
    }
  }
}

void ScenarioState::redistribute_ues(int shut_cell, Rng& rng) {
  const HandoverWeights weights = handover_weights(shut_cell);
  active_[shut_cell] = 0;
  if (aggregate_mode_) {
    redistribute_aggregate(shut_cell, weights, rng);
    refresh();
    return;
  }
  std::vector<UeSession*> members;
  for (auto& ue : ues_)
    if (ue.serving_cell == shut_cell) members.push_back(&ue);
  if (!config_.handover.enabled) {
    for (auto* ue : members) {
      ue->serving_cell = kNoCell;
      ue->prbs = 0;
      ue->throughput = 0.0;
    }
  } else if (!members.empty()) {
    const auto counts =
        rng.multinomial(static_cast<int>(members.size()), weights.probabilities);
    std::size_t next = 0;
    for (std::size_t j = 0; j < weights.cells.size(); ++j)
      for (int c = 0; c < counts[j]; ++c) members[next++]->serving_cell = weights.cells[j];
  }
  refresh();
}

ShutdownOutcome ScenarioState::apply_shutdown(int cell_id, Rng& rng) {
  if (!is_active(cell_id))
    throw IllegalAction("apply_shutdown: cell " + std::to_string(cell_id) +
                        " is not active");
  if (active_count() < 2)
    throw IllegalAction("apply_shutdown: cannot shut the last active cell");

  ShutdownOutcome out;
  out.shut_cell = cell_id;
  out.before = network_summary();

  // A3 diagnostic: old serving RSRP of each UE about to move.
  std::vector<std::pair<int, double>> movers;
  for (const auto& ue : ues_)
    if (ue.serving_cell == cell_id) movers.emplace_back(ue.ue_id, ue.rsrp_dbm);

  redistribute_ues(cell_id, rng);

  for (const auto& [id, old_rsrp] : movers) {
    const auto& ue = ues_[id];
    if (ue.serving_cell == kNoCell) continue;
    ++out.moved_ues;
    if (ue.rsrp_dbm > old_rsrp + config_.handover.a3_offset_db) ++out.a3_satisfied;
  }
  if (aggregate_mode_ && synthesize_ues_)
    out.moved_ues = out.before.per_cell[cell_id].n_ues;

  out.after = network_summary();
  const auto& o = config_.objective;
  out.g_perf = performance_gain(out.before, out.after, o.gain_alpha);
  out.p_gain = power_gain(out.before, out.after, config_.power.p_max_w);
  out.violations = evaluate_constraints(out.before, out.after, o.delta,
                                        o.interference_factor);
  out.reward = reward(out, o.w_perf, o.w_power, o.penalty);
  return out;
}

Rng ScenarioState::shutdown_stream(int cell_id) const {
  return Rng(derive_seed(seed_, kShutdownStream,
                         static_cast<std::uint64_t>(step_count_),
                         static_cast<std::uint64_t>(cell_id)));
}

std::vector<double> ScenarioState::observe() const {
  const int k = num_cells();
  std::vector<double> obs(kFeaturesPerCell * k, 0.0);
  const double prb_norm =
      config_.power.prb_capacity + (aggregate_mode_ ? 0 : config_.power.prb_floor);
  const double ues = std::max(1, total_ues_);
  for (int i = 0; i < k; ++i) {
    if (!active_[i]) continue;
    const auto& c = cache_[i];
    double* f = obs.data() + kFeaturesPerCell * i;
    f[0] = c.n_ues / ues;
    f[1] = static_cast<double>(c.tot_prbs) / prb_norm;
    f[2] = c.avg_thp / config_.traffic.demand_max_bps;
    f[3] = std::min(1.0, c.tot_interference / interference_norm_);
    f[4] = 1.0;
  }
  return obs;
}

StepResult ScenarioState::step(int action) {
  StepResult r;
  r.valid = action >= 0 && action < num_cells() && active_[action] &&
            active_count() >= 2;
  if (r.valid) {
    Rng rng = shutdown_stream(action);
    r.outcome = apply_shutdown(action, rng);
    r.reward = r.outcome->reward;
  } else {
    r.reward = -config_.objective.penalty;
  }
  ++step_count_;
  r.done = step_count_ >= config_.horizon || active_count() < 2;
  r.observation = observe();
  return r;
}

}  // namespace cellsleep
