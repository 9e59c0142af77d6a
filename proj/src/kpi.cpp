// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

#include "cellsleep/kpi.hpp"

#include <fstream>
#include <map>
#include <set>

#include "cellsleep/csv.hpp"
#include "cellsleep/errors.hpp"
#include "cellsleep/rng.hpp"

namespace cellsleep {

std::vector<KpiSnapshot> parse_kpi_csv(std::istream& in) {
  const CsvTable t = parse_csv(in);
  auto need = [&](const char* name) {
    auto c = t.column(name);
    if (!c) throw SchemaError(name);
    return *c;
  };
  const std::size_t c_ts = need("timestamp");
  const std::size_t c_cell = need("cell_id");
  const std::size_t c_ues = need("n_ues");
  const std::size_t c_prb = need("prb_dl");
  const std::size_t c_thp = need("tot_thp_dl");
  const auto c_int = t.column("tot_interference");
  const auto c_act = t.column("active");

  std::vector<KpiSnapshot> snaps;
  std::map<std::string, std::size_t> by_ts;
  std::vector<std::set<int>> seen;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& f = t.rows[r];
    const std::size_t line = t.lines[r];
    KpiRow row;
    row.line = line;
    const long long cell = parse_int_field(f[c_cell], line, "cell_id");
    const long long n = parse_int_field(f[c_ues], line, "n_ues");
    const long long prb = parse_int_field(f[c_prb], line, "prb_dl");
    row.tot_thp_dl = parse_double_field(f[c_thp], line, "tot_thp_dl");
    if (c_int && !f[*c_int].empty())
      row.tot_interference = parse_double_field(f[*c_int], line, "tot_interference");
    if (c_act && !f[*c_act].empty()) {
      const std::string& a = f[*c_act];
      if (a == "1" || a == "true")
        row.active = true;
      else if (a == "0" || a == "false")
        row.active = false;
      else
        throw RowError(line, "active: expected 0/1/true/false, found '" + a + "'");
    }
    if (cell < 0 || n < 0 || prb < 0 || row.tot_thp_dl < 0.0 || row.tot_interference < 0.0)
      throw RowError(line, "negative quantity");
    if (cell > 1'000'000 || n > 1'000'000'000) throw RowError(line, "value out of range");
    row.cell_id = static_cast<int>(cell);
    row.n_ues = static_cast<int>(n);
    row.prb_dl = prb;

    auto [it, fresh] = by_ts.try_emplace(f[c_ts], snaps.size());
    if (fresh) {
      snaps.push_back(KpiSnapshot{f[c_ts], {}});
      seen.emplace_back();
    }
    if (!seen[it->second].insert(row.cell_id).second)
      throw RowError(line, "duplicate cell_id " + std::to_string(row.cell_id) +
                               " at timestamp " + f[c_ts]);
    snaps[it->second].rows.push_back(row);
  }
  return snaps;
}

std::vector<KpiSnapshot> read_kpi_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  return parse_kpi_csv(in);
}

ScenarioState snapshot_to_state(const KpiSnapshot& snapshot,
                                const EnvConfig& config,
                                std::shared_ptr<const NetworkLayout> layout,
                                std::uint64_t seed, bool redistribute) {
  std::vector<CellLoad> cells(layout->size(), CellLoad{0, 0, 0.0, 0.0, false});
  for (const auto& r : snapshot.rows) {
    if (r.cell_id >= layout->size())
      throw RowError(r.line, "cell_id " + std::to_string(r.cell_id) +
                                 " outside the configured layout of " +
                                 std::to_string(layout->size()) + " cells");
    cells[r.cell_id] = CellLoad{r.n_ues, r.prb_dl, r.tot_thp_dl, r.tot_interference, r.active};
  }
  return ScenarioState::from_aggregates(config, std::move(layout), cells, seed,
                                        redistribute);
}

std::vector<ScenarioState> ingest_kpi_csv(const std::filesystem::path& path,
                                          const EnvConfig& config,
                                          std::uint64_t seed, bool redistribute) {
  const auto snaps = read_kpi_csv(path);
  auto layout = std::make_shared<const NetworkLayout>(config.build_layout());
  std::vector<ScenarioState> out;
  out.reserve(snaps.size());
  for (std::size_t i = 0; i < snaps.size(); ++i)
    out.push_back(snapshot_to_state(snaps[i], config, layout,
                                    derive_seed(seed, 41, i), redistribute));
  return out;
}

}  // namespace cellsleep
