#include "rishosim/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "rishosim/rng.hpp"

namespace risho {

namespace {
constexpr double kPi = 3.14159265358979323846;

double wrap_deg(double a) {
  while (a > 180.0) a -= 360.0;
  while (a <= -180.0) a += 360.0;
  return a;
}
}  // namespace

double norm(Vec2 v) { return std::hypot(v.x, v.y); }
double distance(Vec2 a, Vec2 b) { return norm(a - b); }

double Layout::hex_circumradius() const {
  return inter_site_distance_m / std::sqrt(3.0);
}

double Layout::hex_cell_area() const {
  double r = hex_circumradius();
  return 1.5 * std::sqrt(3.0) * r * r;
}

double Layout::zone_area_fraction() const {
  return 2.0 * zone_side_m * zone_side_m / hex_cell_area();
}

Layout build_layout(const TopologyParams& params) {
  if (params.inter_site_distance_m <= 0.0)
    throw std::invalid_argument("inter_site_distance_m must be positive");
  if (params.n_cells != 7)
    throw std::invalid_argument("only the 7-cell hexagonal layout is supported");
  if (params.reuse_factor != 3)
    throw std::invalid_argument("reuse_factor must be 3");

  Layout layout;
  layout.inter_site_distance_m = params.inter_site_distance_m;
  layout.reuse_factor = params.reuse_factor;

  layout.cells.push_back({0, {0.0, 0.0}});
  for (int k = 0; k < 6; ++k) {
    double a = kPi / 3.0 * k;
    layout.cells.push_back(
        {k + 1, {params.inter_site_distance_m * std::cos(a),
                 params.inter_site_distance_m * std::sin(a)}});
  }

  for (const auto& cell : layout.cells) {
    for (int s = 0; s < 3; ++s) {
      layout.sectors.push_back({cell.id, s, cell.id * 3 + s, 120.0 * s});
    }
    // Two panels on diagonally opposite corners, zones facing the interior.
    const Vec2 offsets[2] = {{-40.0, -40.0}, {40.0, 40.0}};
    for (int p = 0; p < 2; ++p) {
      RisPanel panel;
      panel.cell = cell.id;
      panel.index = p;
      panel.global_id = cell.id * 2 + p;
      panel.position = cell.position + offsets[p];
      double su = offsets[p].x < 0 ? 1.0 : -1.0;
      double sv = offsets[p].y < 0 ? 1.0 : -1.0;
      panel.axis_u = {su, 0.0};
      panel.axis_v = {0.0, sv};
      // Zone center azimuth from the site picks the covering sector.
      Vec2 zc = panel.position + 20.0 * panel.axis_u + 20.0 * panel.axis_v;
      double az = std::atan2(zc.y - cell.position.y, zc.x - cell.position.x) * 180.0 / kPi;
      int best = 0;
      double best_off = 1e9;
      for (int s = 0; s < 3; ++s) {
        double off = std::abs(wrap_deg(az - 120.0 * s));
        if (off < best_off) {
          best_off = off;
          best = s;
        }
      }
      panel.host_sector = cell.id * 3 + best;
      layout.panels.push_back(panel);
    }
  }

  double r = layout.hex_circumradius();
  Rect b{1e300, -1e300, 1e300, -1e300};
  for (const auto& c : layout.cells) {
    b.x_lo = std::min(b.x_lo, c.position.x - r);
    b.x_hi = std::max(b.x_hi, c.position.x + r);
    b.y_lo = std::min(b.y_lo, c.position.y - r);
    b.y_hi = std::max(b.y_hi, c.position.y + r);
  }
  layout.bounds = b;
  return layout;
}

int sub_zone_index(double u, double v) {
  int iu = static_cast<int>(std::floor(u / 10.0));
  int iv = static_cast<int>(std::floor(v / 10.0));
  return iv * 4 + iu;
}

std::optional<ZoneHit> in_ris_zone(Vec2 position, const Layout& layout) {
  for (const auto& panel : layout.panels) {
    Vec2 d = position - panel.position;
    double u = d.x * panel.axis_u.x + d.y * panel.axis_u.y;
    double v = d.x * panel.axis_v.x + d.y * panel.axis_v.y;
    if (u >= 0.0 && u < layout.zone_side_m && v >= 0.0 && v < layout.zone_side_m) {
      return ZoneHit{panel.cell, panel.global_id, sub_zone_index(u, v), u, v};
    }
  }
  return std::nullopt;
}

Trajectory generate_trajectory(std::uint64_t seed, double duration_s,
                               double tick_s, const Layout& layout,
                               const TopologyParams& params) {
  if (duration_s <= 0.0) throw std::invalid_argument("duration must be positive");
  if (tick_s <= 0.0) throw std::invalid_argument("tick must be positive");

  auto rng = make_rng(seed);
  const Rect& b = layout.bounds;
  auto draw_point = [&]() -> Vec2 {
    return {uniform(rng, b.x_lo, b.x_hi), uniform(rng, b.y_lo, b.y_hi)};
  };
  double smin = params.speed_min_kmh / 3.6;
  double smax = params.speed_max_kmh / 3.6;

  std::size_t n = static_cast<std::size_t>(std::llround(duration_s / tick_s)) + 1;
  Trajectory t;
  t.tick_s = tick_s;
  t.positions.reserve(n);
  t.speed_mps.reserve(n);
  t.cum_dist_m.reserve(n);

  Vec2 pos = draw_point();
  Vec2 waypoint = draw_point();
  double speed = uniform(rng, smin, smax);
  double cum = 0.0;

  for (std::size_t i = 0; i < n; ++i) {
    t.positions.push_back(pos);
    t.speed_mps.push_back(speed);
    t.cum_dist_m.push_back(cum);
    if (i + 1 == n) break;

    double step = speed * tick_s;
    Vec2 to = waypoint - pos;
    double d = norm(to);
    if (d <= step) {
      pos = waypoint;
      cum += d;
      waypoint = draw_point();
      speed = uniform(rng, smin, smax);
    } else {
      pos = pos + (step / d) * to;
      cum += step;
    }
    // Waypoints are interior so this only guards numeric drift.
    if (pos.x < b.x_lo) pos.x = 2 * b.x_lo - pos.x;
    if (pos.x > b.x_hi) pos.x = 2 * b.x_hi - pos.x;
    if (pos.y < b.y_lo) pos.y = 2 * b.y_lo - pos.y;
    if (pos.y > b.y_hi) pos.y = 2 * b.y_hi - pos.y;
  }
  return t;
}

std::string layout_to_json(const Layout& layout) {
  nlohmann::json j;
  j["inter_site_distance_m"] = layout.inter_site_distance_m;
  j["reuse_factor"] = layout.reuse_factor;
  j["zone_side_m"] = layout.zone_side_m;
  for (const auto& c : layout.cells)
    j["cells"].push_back({{"id", c.id}, {"x", c.position.x}, {"y", c.position.y}});
  for (const auto& s : layout.sectors)
    j["sectors"].push_back({{"cell", s.cell},
                            {"index", s.index},
                            {"global_id", s.global_id},
                            {"boresight_deg", s.boresight_deg}});
  for (const auto& p : layout.panels)
    j["ris_panels"].push_back({{"cell", p.cell},
                               {"index", p.index},
                               {"global_id", p.global_id},
                               {"x", p.position.x},
                               {"y", p.position.y},
                               {"host_sector", p.host_sector}});
  return j.dump(2);
}

std::string trajectory_to_json(const Trajectory& t) {
  nlohmann::json j;
  j["tick_s"] = t.tick_s;
  auto& pts = j["waypoints"];
  for (std::size_t i = 0; i < t.positions.size(); ++i) {
    pts.push_back({{"t", static_cast<double>(i) * t.tick_s},
                   {"x", t.positions[i].x},
                   {"y", t.positions[i].y},
                   {"speed_mps", t.speed_mps[i]}});
  }
  return j.dump();
}

}  // namespace risho
