#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace risho {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
double norm(Vec2 v);
double distance(Vec2 a, Vec2 b);

struct TopologyParams {
  int n_cells = 7;
  double inter_site_distance_m = 200.0;
  int reuse_factor = 3;
  double speed_min_kmh = 10.0;
  double speed_max_kmh = 18.0;
};

struct Sector {
  int cell = 0;
  int index = 0;       // 0..2 within the cell; also the co-channel group
  int global_id = 0;   // cell * 3 + index
  double boresight_deg = 0.0;
};

// One RIS panel. Coverage zone is the 40 m x 40 m square between the panel
// and the cell interior; the panel sits at the zone's outer corner. Local
// zone coordinates (u, v) run inward from the panel, u along x, v along y,
// both in [0, 40).
struct RisPanel {
  int cell = 0;
  int index = 0;      // 0 or 1 within the cell
  int global_id = 0;  // cell * 2 + index
  Vec2 position;      // world coordinates of the panel corner
  Vec2 axis_u;        // unit vector of local u in world coordinates
  Vec2 axis_v;
  int host_sector = 0;  // global sector id whose pattern covers the zone
};

struct CellSite {
  int id = 0;
  Vec2 position;
};

struct Rect {
  double x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 0;
  bool contains(Vec2 p) const {
    return p.x >= x_lo && p.x <= x_hi && p.y >= y_lo && p.y <= y_hi;
  }
};

struct Layout {
  std::vector<CellSite> cells;
  std::vector<Sector> sectors;
  std::vector<RisPanel> panels;
  double inter_site_distance_m = 200.0;
  int reuse_factor = 3;
  double zone_side_m = 40.0;
  double sub_zone_side_m = 10.0;
  Rect bounds;  // mobility region: bounding box of the 7 hexagons

  double hex_circumradius() const;
  double hex_cell_area() const;
  // Fraction of a cell's area covered by its two RIS zones.
  double zone_area_fraction() const;
};

struct ZoneHit {
  int cell = 0;
  int panel = 0;        // global panel id
  int sub_zone = 0;     // 0..15
  double u = 0.0;       // local zone coordinates, meters
  double v = 0.0;
};

// 7-cell hexagonal layout, flat axis along x (first neighbor at (+isd, 0)).
// Deterministic; throws std::invalid_argument on unsupported inputs.
Layout build_layout(const TopologyParams& params);

// Unique covering panel and sub-zone for a position, if any. Zone membership
// is half-open from the panel corner, so zones of one cell never overlap and
// the cell center itself lies outside both.
std::optional<ZoneHit> in_ris_zone(Vec2 position, const Layout& layout);

// Sub-zone index from local zone coordinates: floor(v/10)*4 + floor(u/10).
int sub_zone_index(double u, double v);

struct Trajectory {
  double tick_s = 0.01;
  std::vector<Vec2> positions;      // one sample per tick, duration/tick + 1
  std::vector<double> speed_mps;    // segment speed active at each sample
  std::vector<double> cum_dist_m;   // cumulative traveled distance
};

// Random-waypoint trajectory inside layout.bounds with per-segment uniform
// speed in [speed_min, speed_max] km/h. Pure function of (seed, inputs).
Trajectory generate_trajectory(std::uint64_t seed, double duration_s,
                               double tick_s, const Layout& layout,
                               const TopologyParams& params);

// Debug serialization (JSON text).
std::string layout_to_json(const Layout& layout);
std::string trajectory_to_json(const Trajectory& t);

}  // namespace risho
