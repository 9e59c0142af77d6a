// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "cellsleep/env.hpp"

namespace cellsleep {

// One row of a per-cell KPI export. The schema is generic: mandatory columns
// timestamp, cell_id, n_ues, prb_dl, tot_thp_dl; optional tot_interference
// (mW, default 0) and active (default 1).
struct KpiRow {
  int cell_id = 0;
  int n_ues = 0;
  std::int64_t prb_dl = 0;
  double tot_thp_dl = 0.0;
  double tot_interference = 0.0;
  bool active = true;
  std::size_t line = 0;  // source line, for diagnostics
};

struct KpiSnapshot {
  std::string timestamp;
  std::vector<KpiRow> rows;  // file order
};

/// Groups rows by timestamp in order of first appearance.
std::vector<KpiSnapshot> parse_kpi_csv(std::istream& in);
std::vector<KpiSnapshot> read_kpi_csv(const std::filesystem::path& path);

/// Aggregate-mode scenario over the configured layout. Cells absent from the
/// snapshot are inactive.
ScenarioState snapshot_to_state(const KpiSnapshot& snapshot,
                                const EnvConfig& config,
                                std::shared_ptr<const NetworkLayout> layout,
                                std::uint64_t seed, bool redistribute);

std::vector<ScenarioState> ingest_kpi_csv(const std::filesystem::path& path,
                                          const EnvConfig& config,
                                          std::uint64_t seed,
                                          bool redistribute = false);

}  // namespace cellsleep
