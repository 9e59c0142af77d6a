// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

namespace cellsleep {

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

double distance(Point a, Point b);

struct CellSite {
  int id = 0;
  Point position;
  int du_id = 0;
  int cu_id = 0;
  bool operator==(const CellSite&) const = default;
};

/// Fixed cell-site geometry. Sites are grouped into DUs of three consecutive
/// ids under a single CU; the grouping is metadata and does not enter any
/// radio or power computation.
class NetworkLayout {
 public:
  static constexpr int kCellsPerDu = 3;

  /// Builds a layout from explicit site positions (ids follow order).
  NetworkLayout(std::vector<Point> positions, int neighbor_count,
                double inter_site_distance);

  int size() const { return static_cast<int>(sites_.size()); }
  const std::vector<CellSite>& sites() const { return sites_; }
  const CellSite& site(int cell_id) const;

  /// The min(neighbor_count, K-1) nearest other cells, nearest first, ties by
  /// lower id.
  std::span<const int> neighbors(int cell_id) const;
  int neighbor_count() const { return neighbor_count_; }

  double inter_site_distance() const { return inter_site_distance_; }
  Point area_min() const { return area_min_; }
  Point area_max() const { return area_max_; }
  double width() const { return area_max_.x - area_min_.x; }
  double height() const { return area_max_.y - area_min_.y; }

  bool operator==(const NetworkLayout&) const = default;

 private:
  void check(int cell_id) const;

  std::vector<CellSite> sites_;
  int neighbor_count_ = 0;
  std::vector<std::vector<int>> neighbors_;
  double inter_site_distance_ = 0.0;
  Point area_min_;
  Point area_max_;
};

/// Regular rows x cols grid with the given pitch; site (r, c) gets id
/// r*cols + c and sits at ((c + 0.5) d, (r + 0.5) d), so the area is
/// [0, cols d] x [0, rows d].
NetworkLayout build_grid_layout(int rows, int cols, double inter_site_distance,
                                int neighbor_count);

/// Euclidean distance from a cell site to a point. Throws IndexError.
double distance(const NetworkLayout& layout, int cell_id, Point point);

}  // namespace cellsleep
