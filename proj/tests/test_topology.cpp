// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "cellsleep/errors.hpp"
#include "cellsleep/rng.hpp"
#include "cellsleep/topology.hpp"

using namespace cellsleep;

TEST_CASE("default 4x3 grid has 12 sites and interior neighbors at the pitch") {
  const auto layout = build_grid_layout(4, 3, 500.0, 4);
  CHECK(layout.size() == 12);
  for (int interior : {4, 7}) {
    const auto nb = layout.neighbors(interior);
    REQUIRE(nb.size() == 4);
    CHECK(distance(layout.site(interior).position, layout.site(nb[0]).position) ==
          doctest::Approx(500.0));
  }
}

TEST_CASE("neighbor count clamps to K-1") {
  const auto layout = build_grid_layout(1, 2, 500.0, 4);
  CHECK(layout.neighbors(0).size() == 1);
  CHECK(layout.neighbors(1).size() == 1);
  CHECK(layout.neighbors(0)[0] == 1);
}

TEST_CASE("2x2 grid orders ties by id") {
  const auto layout = build_grid_layout(2, 2, 500.0, 4);
  const auto nb = layout.neighbors(0);
  REQUIRE(nb.size() == 3);
  CHECK(nb[0] == 1);
  CHECK(nb[1] == 2);
  CHECK(nb[2] == 3);
  CHECK(distance(layout.site(0).position, layout.site(3).position) ==
        doctest::Approx(707.10678).epsilon(1e-6));
}

TEST_CASE("distance examples") {
  CHECK(distance(Point{0, 0}, Point{3, 4}) == 5.0);
  const auto layout = build_grid_layout(2, 2, 500.0, 4);
  CHECK(distance(layout, 2, layout.site(2).position) == 0.0);
  CHECK(distance(layout, 1, layout.site(2).position) ==
        distance(layout, 2, layout.site(1).position));
}

TEST_CASE("grid metadata and bounds") {
  const auto layout = build_grid_layout(4, 3, 500.0, 4);
  for (const auto& s : layout.sites()) {
    CHECK(s.du_id == s.id / 3);
    CHECK(s.position.x >= layout.area_min().x);
    CHECK(s.position.x <= layout.area_max().x);
    CHECK(s.position.y >= layout.area_min().y);
    CHECK(s.position.y <= layout.area_max().y);
  }
  CHECK(layout.width() == doctest::Approx(1500.0));
  CHECK(layout.height() == doctest::Approx(2000.0));
  CHECK_THROWS_AS(layout.site(12), IndexError);
  CHECK_THROWS_AS(layout.site(-1), IndexError);
}

TEST_CASE("non-positive dimensions are configuration errors") {
  CHECK_THROWS_AS(build_grid_layout(0, 3, 500.0, 4), ConfigError);
  CHECK_THROWS_AS(build_grid_layout(1, 1, 500.0, 4), ConfigError);
  CHECK_THROWS_AS(build_grid_layout(2, 2, 0.0, 4), ConfigError);
  CHECK_THROWS_AS(build_grid_layout(2, 2, 500.0, 0), ConfigError);
}

TEST_CASE("property: neighbor lists on random layouts") {
  Rng rng(derive_seed(77, 1));
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 2 + static_cast<int>(rng.below(15));
    const int kn = 1 + static_cast<int>(rng.below(6));
    std::vector<Point> pts;
    for (int i = 0; i < k; ++i) {
      // coarse lattice coordinates produce plenty of distance ties
      pts.push_back({100.0 * rng.below(6), 100.0 * rng.below(6)});
    }
    const NetworkLayout layout(pts, kn, 100.0);
    CHECK(layout == NetworkLayout(pts, kn, 100.0));
    for (int c = 0; c < k; ++c) {
      const auto nb = layout.neighbors(c);
      REQUIRE(static_cast<int>(nb.size()) == std::min(kn, k - 1));
      std::set<int> uniq(nb.begin(), nb.end());
      CHECK(uniq.size() == nb.size());
      CHECK(!uniq.contains(c));
      auto d = [&](int i) { return distance(pts[c], pts[i]); };
      for (std::size_t i = 1; i < nb.size(); ++i) {
        const bool ordered = d(nb[i - 1]) < d(nb[i]) ||
                             (d(nb[i - 1]) == d(nb[i]) && nb[i - 1] < nb[i]);
        CHECK(ordered);
      }
      const double worst = d(nb.back());
      for (int o = 0; o < k; ++o) {
        if (o == c || uniq.contains(o)) continue;
        CHECK(worst <= d(o));
        if (worst == d(o)) CHECK(nb.back() < o);
      }
    }
  }
}
