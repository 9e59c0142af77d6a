// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

#include "cellsleep/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cellsleep/errors.hpp"

namespace cellsleep {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

NetworkLayout::NetworkLayout(std::vector<Point> positions, int neighbor_count,
                             double inter_site_distance)
    : neighbor_count_(neighbor_count),
      inter_site_distance_(inter_site_distance) {
  if (positions.empty())
    throw ConfigError("topology", "layout needs at least one site");
  if (neighbor_count < 1)
    throw ConfigError("topology.neighbors", "must be >= 1");
  if (!(inter_site_distance > 0.0))
    throw ConfigError("topology.inter_site_distance", "must be > 0");

  const int k = static_cast<int>(positions.size());
  sites_.reserve(k);
  for (int i = 0; i < k; ++i) {
    if (!std::isfinite(positions[i].x) || !std::isfinite(positions[i].y))
      throw ConfigError("topology", "non-finite site position");
    sites_.push_back({i, positions[i], i / kCellsPerDu, 0});
  }

  const double half = inter_site_distance / 2.0;
  area_min_ = area_max_ = positions.front();
  for (const Point& p : positions) {
    area_min_ = {std::min(area_min_.x, p.x), std::min(area_min_.y, p.y)};
    area_max_ = {std::max(area_max_.x, p.x), std::max(area_max_.y, p.y)};
  }
  area_min_ = {area_min_.x - half, area_min_.y - half};
  area_max_ = {area_max_.x + half, area_max_.y + half};

  const int keep = std::min(neighbor_count, k - 1);
  neighbors_.resize(k);
  for (int i = 0; i < k; ++i) {
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::erase(order, i);
    std::vector<double> d(k);
    for (int j = 0; j < k; ++j) d[j] = distance(positions[i], positions[j]);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return d[a] < d[b]; });
    neighbors_[i].assign(order.begin(), order.begin() + keep);
  }
}

void NetworkLayout::check(int cell_id) const {
  if (cell_id < 0 || cell_id >= size())
    throw IndexError("cell id " + std::to_string(cell_id) + " out of range [0, " +
                     std::to_string(size()) + ")");
}

const CellSite& NetworkLayout::site(int cell_id) const {
  check(cell_id);
  return sites_[cell_id];
}

std::span<const int> NetworkLayout::neighbors(int cell_id) const {
  check(cell_id);
  return neighbors_[cell_id];
}

NetworkLayout build_grid_layout(int rows, int cols, double inter_site_distance,
                                int neighbor_count) {
  if (rows < 1 || cols < 1 || rows * cols < 2)
    throw ConfigError("topology.rows/cols", "grid needs rows*cols >= 2");
  if (!(inter_site_distance > 0.0))
    throw ConfigError("topology.inter_site_distance", "must be > 0");
  std::vector<Point> positions;
  positions.reserve(rows * cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      positions.push_back({(c + 0.5) * inter_site_distance,
                           (r + 0.5) * inter_site_distance});
  return NetworkLayout(std::move(positions), neighbor_count,
                       inter_site_distance);
}

double distance(const NetworkLayout& layout, int cell_id, Point point) {
  return distance(layout.site(cell_id).position, point);
}

}  // namespace cellsleep
