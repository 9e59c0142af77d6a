// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

#include "cellsleep/metrics.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "cellsleep/errors.hpp"

namespace cellsleep {
namespace {

std::ofstream open_csv(const std::filesystem::path& path, const std::string& schema_name) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const auto& cols = csv_schema(schema_name);
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

std::vector<CdfPoint> empirical_cdf(std::vector<double> samples) {
  std::vector<CdfPoint> out;
  if (samples.empty()) return out;
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (i + 1 < samples.size() && samples[i + 1] == samples[i]) continue;
    out.push_back({samples[i], i + 1 == samples.size() ? 1.0 : static_cast<double>(i + 1) / n});
  }
  return out;
}

double cdf_at(std::span<const double> sorted_samples, double x) {
  if (sorted_samples.empty()) return 0.0;
  const auto it = std::upper_bound(sorted_samples.begin(), sorted_samples.end(), x);
  return static_cast<double>(it - sorted_samples.begin()) /
         static_cast<double>(sorted_samples.size());
}

std::vector<double> ue_throughputs(const PolicyEvaluation& eval) {
  std::vector<double> out;
  for (const auto& s : eval.details)
    for (const auto& ue : s.ues_after) out.push_back(ue.throughput);
  return out;
}

std::vector<EeGain> ee_gain_per_cell(const PolicyEvaluation& eval) {
  std::map<int, EeGain> acc;
  for (const auto& s : eval.details) {
    const auto& before = s.outcome.before.per_cell;
    const auto& after = s.outcome.after.per_cell;
    for (std::size_t k = 0; k < after.size() && k < before.size(); ++k) {
      if (!after[k].active || !before[k].active) continue;
      auto& g = acc[static_cast<int>(k)];
      g.cell = static_cast<int>(k);
      g.ee_gain += after[k].ee - before[k].ee;
      ++g.samples;
    }
  }
  std::vector<EeGain> out;
  for (auto& [k, g] : acc) {
    g.ee_gain /= g.samples;
    out.push_back(g);
  }
  return out;
}

const std::vector<std::string>& csv_schema(const std::string& file_name) {
  static const std::map<std::string, std::vector<std::string>> schemas = {
      {"training_curve.csv", {"step", "mean_reward"}},
      {"gains.csv", {"scenario", "g_perf", "p_gain"}},
      {"ee_gain_per_cell.csv", {"cell", "method", "ee_gain"}},
      {"throughput_cdf.csv", {"method", "thp_bit_s", "cdf"}},
      {"thp_vs_interference.csv", {"method", "interference_mw", "thp_bit_s"}},
      {"summary.csv",
       {"method", "scenarios", "mean_objective", "mean_oracle", "regret", "match_rate"}},
      {"scenarios.csv",
       {"method", "scenario", "seed", "action", "objective", "oracle_cell", "oracle_objective",
        "match", "violations"}},
      {"ingest.csv",
       {"timestamp", "action", "objective", "oracle_cell", "oracle_objective", "g_perf",
        "p_gain", "violations"}},
  };
  auto it = schemas.find(file_name);
  if (it == schemas.end()) throw std::invalid_argument("no schema for " + file_name);
  return it->second;
}

void check_schema(const CsvTable& table, const std::string& file_name) {
  const auto& cols = csv_schema(file_name);
  for (const auto& c : cols)
    if (!table.column(c)) throw SchemaError(c);
  if (table.header != cols) throw SchemaError("column order of " + file_name);
  for (std::size_t r = 0; r < table.rows.size(); ++r)
    for (std::size_t i = 0; i < cols.size(); ++i) {
      const auto& c = cols[i];
      if (c == "method" || c == "violations" || c == "timestamp") continue;
      parse_double_field(table.rows[r][i], table.lines[r], c);
    }
}

void write_training_curve(const std::filesystem::path& path,
                          std::span<const CurvePoint> curve) {
  auto out = open_csv(path, "training_curve.csv");
  for (const auto& p : curve) out << p.step << ',' << format_number(p.mean_reward) << '\n';
  finish(out, path);
}

void write_gains(const std::filesystem::path& path, const PolicyEvaluation& eval) {
  auto out = open_csv(path, "gains.csv");
  for (std::size_t i = 0; i < eval.details.size(); ++i) {
    const auto& o = eval.details[i].outcome;
    out << i << ',' << format_number(o.g_perf);
    out << ',' << format_number(o.p_gain) << '\n';
  }
  finish(out, path);
}

void write_ee_gain(const std::filesystem::path& path,
                   std::span<const MethodEvaluation> methods) {
  auto out = open_csv(path, "ee_gain_per_cell.csv");
  for (const auto& m : methods)
    for (const auto& g : ee_gain_per_cell(m.eval))
      out << g.cell << ',' << m.method << ',' << format_number(g.ee_gain) << '\n';
  finish(out, path);
}

void write_throughput_cdf(const std::filesystem::path& path,
                          std::span<const MethodEvaluation> methods) {
  auto out = open_csv(path, "throughput_cdf.csv");
  for (const auto& m : methods)
    for (const auto& p : empirical_cdf(ue_throughputs(m.eval))) {
      out << m.method << ',' << format_number(p.value);
      out << ',' << format_number(p.cdf) << '\n';
    }
  finish(out, path);
}

void write_thp_vs_interference(const std::filesystem::path& path,
                               std::span<const MethodEvaluation> methods) {
  auto out = open_csv(path, "thp_vs_interference.csv");
  for (const auto& m : methods)
    for (const auto& s : m.eval.details)
      for (const auto& ue : s.ues_after) {
        out << m.method << ',' << format_number(ue.interference);
        out << ',' << format_number(ue.throughput) << '\n';
      }
  finish(out, path);
}

void write_summary(const std::filesystem::path& path,
                   std::span<const MethodEvaluation> methods) {
  auto out = open_csv(path, "summary.csv");
  for (const auto& m : methods) {
    const auto& e = m.eval;
    out << m.method << ',' << e.scenarios << ',' << format_number(e.mean_policy);
    out << ',' << format_number(e.mean_oracle);
    out << ',' << format_number(e.regret);
    out << ',' << format_number(e.match_rate) << '\n';
  }
  finish(out, path);
}

void write_scenarios(const std::filesystem::path& path,
                     std::span<const MethodEvaluation> methods) {
  auto out = open_csv(path, "scenarios.csv");
  for (const auto& m : methods)
    for (std::size_t i = 0; i < m.eval.details.size(); ++i) {
      const auto& s = m.eval.details[i];
      out << m.method << ',' << i << ',' << s.seed << ',' << s.action << ','
          << format_number(s.policy_value);
      out << ',' << s.oracle_cell << ',' << format_number(s.oracle_value);
      out << ',' << (s.match ? 1 : 0) << ',' << s.outcome.violations.to_string() << '\n';
    }
  finish(out, path);
}

void export_evaluation(const std::filesystem::path& out_dir,
                       std::span<const MethodEvaluation> methods,
                       std::size_t gains_from) {
  std::filesystem::create_directories(out_dir);
  if (gains_from < methods.size())
    write_gains(out_dir / "gains.csv", methods[gains_from].eval);
  write_ee_gain(out_dir / "ee_gain_per_cell.csv", methods);
  write_throughput_cdf(out_dir / "throughput_cdf.csv", methods);
  write_thp_vs_interference(out_dir / "thp_vs_interference.csv", methods);
  write_summary(out_dir / "summary.csv", methods);
  write_scenarios(out_dir / "scenarios.csv", methods);
}

}  // namespace cellsleep
