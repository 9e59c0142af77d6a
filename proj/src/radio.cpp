// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

#include "cellsleep/radio.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "cellsleep/errors.hpp"

namespace cellsleep {

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

double thermal_noise_dbm(double bandwidth_hz, double noise_figure_db) {
  return -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
}

void RadioConstants::validate() const {
  if (!(prb_bandwidth_hz > 0.0))
    throw ConfigError("radio.prb_bandwidth_hz", "must be > 0");
  if (!(carrier_ghz > 0.0)) throw ConfigError("radio.carrier_ghz", "must be > 0");
  if (!(interference_alpha >= 0.0))
    throw ConfigError("radio.interference_alpha", "must be >= 0");
  if (!(h_bs > 0.0)) throw ConfigError("radio.h_bs", "must be > 0");
  if (!(h_ut > 0.0)) throw ConfigError("radio.h_ut", "must be > 0");
  if (!std::isfinite(ptx_dbm)) throw ConfigError("radio.ptx_dbm", "not finite");
  if (!std::isfinite(noise_dbm))
    throw ConfigError("radio.noise_dbm", "not finite");
}

double pathloss_uma(double d2d, const RadioConstants& rc) {
  const double d = std::max(d2d, 1.0);
  const double dh = rc.h_bs - rc.h_ut;
  const double d3d = std::sqrt(d * d + dh * dh);
  return 13.54 + 39.08 * std::log10(d3d) + 20.0 * std::log10(rc.carrier_ghz) -
         0.6 * (rc.h_ut - 1.5);
}

double rsrp(const NetworkLayout& layout, int cell_id, Point ue,
            const RadioConstants& rc) {
  return rc.ptx_dbm - pathloss_uma(distance(layout, cell_id, ue), rc);
}

double interference(const NetworkLayout& layout, int serving_cell, Point ue,
                    std::span<const std::uint8_t> active,
                    const RadioConstants& rc) {
  if (active.size() != static_cast<std::size_t>(layout.size()))
    throw std::invalid_argument("interference: active flags length != K");
  double total = 0.0;
  for (int i : layout.neighbors(serving_cell)) {
    if (!active[i]) continue;
    total += rc.interference_alpha * dbm_to_mw(rsrp(layout, i, ue, rc));
  }
  return total;
}

double sinr(double rsrp_dbm, double interference_mw, const RadioConstants& rc) {
  if (interference_mw < 0.0)
    throw std::invalid_argument("sinr: negative interference");
  return dbm_to_mw(rsrp_dbm) / (interference_mw + dbm_to_mw(rc.noise_dbm));
}

double shannon_throughput(std::int64_t prbs, double sinr,
                          const RadioConstants& rc) {
  return static_cast<double>(prbs) * rc.prb_bandwidth_hz * std::log2(1.0 + sinr);
}

std::int64_t prb_demand(double r_demand, double sinr, const RadioConstants& rc) {
  if (!(r_demand >= 0.0))
    throw std::invalid_argument("prb_demand: negative demand");
  if (r_demand == 0.0) return 0;
  if (!(sinr > 0.0))
    throw InfeasibleDemand("prb_demand: zero SINR with demand " +
                           std::to_string(r_demand) + " bit/s");
  const double per_prb = rc.prb_bandwidth_hz * std::log2(1.0 + sinr);
  const double q = std::ceil(r_demand / per_prb);
  if (!(q < 9.0e15))
    throw InfeasibleDemand("prb_demand: PRB count overflows");
  auto n = static_cast<std::int64_t>(q);
  // The ceiling of a rounded quotient can be off by one either way; settle
  // it against the throughput function itself.
  while (n > 0 && shannon_throughput(n - 1, sinr, rc) >= r_demand) --n;
  while (shannon_throughput(n, sinr, rc) < r_demand) ++n;
  return n;
}

}  // namespace cellsleep
