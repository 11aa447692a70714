#include "doctest.h"

#include <stdexcept>

#include <cmath>
#include <set>

#include "rishosim/geometry.hpp"
#include "rishosim/rng.hpp"

using namespace risho;

namespace {
Layout default_layout() { return build_layout(TopologyParams{}); }
}

TEST_CASE("hex layout geometry") {
  Layout layout = default_layout();

  CHECK(layout.cells.size() == 7);
  CHECK(layout.sectors.size() == 21);
  CHECK(layout.panels.size() == 14);

  CHECK(layout.cells[0].position.x == doctest::Approx(0.0));
  CHECK(layout.cells[0].position.y == doctest::Approx(0.0));
  // First neighbor on the +x axis.
  CHECK(layout.cells[1].position.x == doctest::Approx(200.0));
  CHECK(layout.cells[1].position.y == doctest::Approx(0.0).epsilon(1e-12));

  for (int c = 1; c < 7; ++c) {
    CHECK(distance(layout.cells[c].position, layout.cells[0].position) ==
          doctest::Approx(200.0).epsilon(1e-12));
  }

  for (const auto& s : layout.sectors) {
    CHECK(s.global_id == s.cell * 3 + s.index);
    CHECK(s.boresight_deg == doctest::Approx(120.0 * s.index));
  }
}

TEST_CASE("layout rejects unsupported parameters") {
  TopologyParams p;
  p.inter_site_distance_m = 0.0;
  CHECK_THROWS_AS(build_layout(p), std::invalid_argument);
  p = TopologyParams{};
  p.n_cells = 19;
  CHECK_THROWS_AS(build_layout(p), std::invalid_argument);
}

TEST_CASE("ris zone membership") {
  Layout layout = default_layout();

  SUBCASE("panel corner offset lands in sub-zone 0") {
    for (const auto& panel : layout.panels) {
      Vec2 probe = panel.position + 0.5 * panel.axis_u + 0.5 * panel.axis_v;
      auto hit = in_ris_zone(probe, layout);
      REQUIRE(hit.has_value());
      CHECK(hit->panel == panel.global_id);
      CHECK(hit->sub_zone == 0);
    }
  }

  SUBCASE("cell center is outside both zones") {
    for (const auto& cell : layout.cells) {
      CHECK_FALSE(in_ris_zone(cell.position, layout).has_value());
    }
  }

  SUBCASE("sub-zones tile the square exactly") {
    auto rng = make_rng(99);
    const auto& panel = layout.panels[0];
    for (int i = 0; i < 2000; ++i) {
      double u = uniform(rng, 0.0, 39.999);
      double v = uniform(rng, 0.0, 39.999);
      Vec2 p = panel.position + u * panel.axis_u + v * panel.axis_v;
      auto hit = in_ris_zone(p, layout);
      REQUIRE(hit.has_value());
      CHECK(hit->panel == panel.global_id);
      CHECK(hit->sub_zone == sub_zone_index(u, v));
      CHECK(hit->sub_zone >= 0);
      CHECK(hit->sub_zone <= 15);
    }
    // Just past the inner corner along the diagonal: that point falls into
    // the cell's opposite zone, never into this one.
    Vec2 diagonal = panel.position + 40.0001 * panel.axis_u + 40.0001 * panel.axis_v;
    auto other = in_ris_zone(diagonal, layout);
    REQUIRE(other.has_value());
    CHECK(other->panel != panel.global_id);
    CHECK(other->cell == panel.cell);
    // Off the shared diagonal the membership is empty.
    Vec2 outside = panel.position + 40.0001 * panel.axis_u - 0.0001 * panel.axis_v;
    CHECK_FALSE(in_ris_zone(outside, layout).has_value());
  }

  SUBCASE("zones cover about 9.2% of the hex cell area") {
    CHECK(layout.zone_area_fraction() == doctest::Approx(0.092).epsilon(0.01));
  }
}

TEST_CASE("trajectory sampling and determinism") {
  Layout layout = default_layout();
  TopologyParams params;

  SUBCASE("sample count for 300 s at 10 ms") {
    Trajectory t = generate_trajectory(1, 300.0, 0.01, layout, params);
    CHECK(t.positions.size() == 30001);
  }

  SUBCASE("speeds stay inside the configured range over 100 seeds") {
    double lo = params.speed_min_kmh / 3.6;
    double hi = params.speed_max_kmh / 3.6;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      Trajectory t = generate_trajectory(seed, 5.0, 0.01, layout, params);
      for (std::size_t i = 0; i < t.positions.size(); ++i) {
        CHECK(t.speed_mps[i] >= lo - 1e-12);
        CHECK(t.speed_mps[i] <= hi + 1e-12);
        CHECK(layout.bounds.contains(t.positions[i]));
        if (i > 0) {
          double step = distance(t.positions[i], t.positions[i - 1]);
          CHECK(step <= hi * 0.01 + 1e-9);
        }
      }
    }
  }

  SUBCASE("same seed gives bitwise-identical waypoints") {
    Trajectory a = generate_trajectory(42, 30.0, 0.01, layout, params);
    Trajectory b = generate_trajectory(42, 30.0, 0.01, layout, params);
    REQUIRE(a.positions.size() == b.positions.size());
    for (std::size_t i = 0; i < a.positions.size(); ++i) {
      CHECK(a.positions[i].x == b.positions[i].x);
      CHECK(a.positions[i].y == b.positions[i].y);
      CHECK(a.speed_mps[i] == b.speed_mps[i]);
    }
  }

  SUBCASE("different seeds diverge") {
    Trajectory a = generate_trajectory(1, 5.0, 0.01, layout, params);
    Trajectory b = generate_trajectory(2, 5.0, 0.01, layout, params);
    CHECK((a.positions[0].x != b.positions[0].x || a.positions[0].y != b.positions[0].y));
  }

  SUBCASE("invalid duration rejected") {
    CHECK_THROWS_AS(generate_trajectory(1, -1.0, 0.01, layout, params),
                    std::invalid_argument);
  }
}

TEST_CASE("layout and trajectory serialize to json") {
  Layout layout = default_layout();
  std::string j = layout_to_json(layout);
  CHECK(j.find("ris_panels") != std::string::npos);
  Trajectory t = generate_trajectory(5, 1.0, 0.01, layout, TopologyParams{});
  std::string tj = trajectory_to_json(t);
  CHECK(tj.find("waypoints") != std::string::npos);
}
