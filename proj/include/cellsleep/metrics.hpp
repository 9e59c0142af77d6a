// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cellsleep/csv.hpp"
#include "cellsleep/oracle.hpp"
#include "cellsleep/train.hpp"

namespace cellsleep {

struct MethodEvaluation {
  std::string method;
  PolicyEvaluation eval;
};

struct CdfPoint {
  double value = 0.0;
  double cdf = 0.0;
};

/// Empirical CDF at the distinct sample values, ascending; the last point is
/// exactly 1.
std::vector<CdfPoint> empirical_cdf(std::vector<double> samples);

/// Empirical CDF of `samples` evaluated at x (fraction of samples <= x).
double cdf_at(std::span<const double> sorted_samples, double x);

/// Post-shutdown throughput of every UE over all evaluated scenarios.
std::vector<double> ue_throughputs(const PolicyEvaluation& eval);

struct EeGain {
  int cell = 0;
  double ee_gain = 0.0;  // mean of EE_after - EE_before over surviving scenarios
  int samples = 0;
};

std::vector<EeGain> ee_gain_per_cell(const PolicyEvaluation& eval);

/// Header of each exported file, keyed by file name.
const std::vector<std::string>& csv_schema(const std::string& file_name);

/// Header matches the schema and every non-method field is a finite number.
/// Throws SchemaError/RowError otherwise.
void check_schema(const CsvTable& table, const std::string& file_name);

void write_training_curve(const std::filesystem::path& path,
                          std::span<const CurvePoint> curve);
void write_gains(const std::filesystem::path& path, const PolicyEvaluation& eval);
void write_ee_gain(const std::filesystem::path& path,
                   std::span<const MethodEvaluation> methods);
void write_throughput_cdf(const std::filesystem::path& path,
                          std::span<const MethodEvaluation> methods);
void write_thp_vs_interference(const std::filesystem::path& path,
                               std::span<const MethodEvaluation> methods);
void write_summary(const std::filesystem::path& path,
                   std::span<const MethodEvaluation> methods);
void write_scenarios(const std::filesystem::path& path,
                     std::span<const MethodEvaluation> methods);

/// gains.csv for `methods[gains_from]`, plus the multi-method files.
void export_evaluation(const std::filesystem::path& out_dir,
                       std::span<const MethodEvaluation> methods,
                       std::size_t gains_from = 0);

}  // namespace cellsleep
