// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>

#include "cellsleep/topology.hpp"

namespace cellsleep {

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);

/// Thermal noise (-174 dBm/Hz) over a bandwidth plus a receiver noise figure.
double thermal_noise_dbm(double bandwidth_hz, double noise_figure_db);

struct RadioConstants {
  double ptx_dbm = 46.0;
  double carrier_ghz = 3.5;
  double h_bs = 25.0;
  double h_ut = 1.5;
  double prb_bandwidth_hz = 360e3;
  double noise_dbm = thermal_noise_dbm(360e3, 9.0);
  double interference_alpha = 1.0;

  /// Throws ConfigError on an invariant violation.
  void validate() const;
  bool operator==(const RadioConstants&) const = default;
};

/// 3GPP TR 38.901 UMa NLOS pathloss in dB. Distances under 1 m are clamped.
double pathloss_uma(double d2d, const RadioConstants& rc);

/// Received reference power from a cell at a point, dBm.
double rsrp(const NetworkLayout& layout, int cell_id, Point ue,
            const RadioConstants& rc);

/// Linear interference (mW) from the active neighbors of the serving cell:
/// sum of alpha * mW(rsrp_i). `active` has one flag per cell.
double interference(const NetworkLayout& layout, int serving_cell, Point ue,
                    std::span<const std::uint8_t> active,
                    const RadioConstants& rc);

/// Linear SINR.
double sinr(double rsrp_dbm, double interference_mw, const RadioConstants& rc);

/// prbs * B_prb * log2(1 + sinr), bit/s.
double shannon_throughput(std::int64_t prbs, double sinr,
                          const RadioConstants& rc);

/// Smallest PRB count whose Shannon throughput covers the demand. The result
/// is tight against shannon_throughput as evaluated in floating point.
/// Throws InfeasibleDemand when sinr <= 0 and demand > 0.
std::int64_t prb_demand(double r_demand, double sinr, const RadioConstants& rc);

}  // namespace cellsleep
