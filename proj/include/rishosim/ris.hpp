#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rishosim/channel.hpp"

namespace risho {

struct AdamParams {
  double lr = 0.05;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  int step = 0;

  explicit AdamState(Eigen::Index n) : m(Eigen::VectorXd::Zero(n)), v(Eigen::VectorXd::Zero(n)) {}
  // One ascent step on the given gradient.
  void update(Eigen::VectorXd& phi, const Eigen::VectorXd& grad, const AdamParams& p);
};

// Received power gain |h_eff|^2 for a phase vector.
double power_at(const Eigen::VectorXd& phi, const Eigen::VectorXcd& h_br,
                const Eigen::VectorXcd& h_ru);

// Analytic gradient of the received power with respect to the phases:
// grad_i = -2 Im[conj(h_eff) h_ru,i h_br,i e^{j phi_i}], the ascent direction.
Eigen::VectorXd grad_phi(const Eigen::VectorXd& phi, const Eigen::VectorXcd& h_br,
                         const Eigen::VectorXcd& h_ru);

// Wrap phases into [0, 2 pi).
void canonicalize_phases(Eigen::VectorXd& phi);

struct OptimizeOptions {
  AdamParams adam;
  double eps = 1e-4;
  int max_iters = 5000;
};

struct OptimizeResult {
  Eigen::VectorXd phi;                  // canonicalized
  std::vector<double> objective_trace;  // J_t, the min power per iteration
  double initial_min_power = 0.0;
  double final_min_power = 0.0;
  bool converged = false;
  int iterations = 0;
};

// Worst-point gradient ascent over a spatial grid: evaluate the power at all
// grid points, take one Adam step on the current minimum, stop when the
// relative objective change falls below eps. Returns the best phases seen by
// the max-min objective, so the result never falls below the random start.
// h_ru_grid has one row per grid point.
OptimizeResult optimize_zone(const Eigen::VectorXcd& h_br,
                             const Eigen::MatrixXcd& h_ru_grid,
                             const OptimizeOptions& options, std::mt19937_64& rng);

enum class SweepStrategy { Sequential, Simultaneous };

const char* to_string(SweepStrategy s);
std::optional<SweepStrategy> sweep_strategy_from_string(const std::string& s);

struct RisCodebook {
  SweepStrategy strategy = SweepStrategy::Sequential;
  int n_elements = 0;
  // One full-panel configuration per sub-zone. Under Simultaneous all 16
  // coincide: every element keeps its own group's sub-beam.
  std::vector<Eigen::VectorXd> entries;
  std::vector<std::pair<int, int>> groups;  // element [begin, end) per sub-beam
  std::vector<bool> converged;
  std::vector<double> min_power;  // final max-min objective per sub-zone

  const Eigen::VectorXd& active_config(int frame) const;
};

// Active sub-beam indices for an SSB frame: Sequential cycles one entry per
// frame, Simultaneous keeps all 16 up.
std::vector<int> beam_schedule(const RisCodebook& codebook, int frame);

struct RisParams {
  int n_elements = 1600;
  double element_spacing_wavelengths = 0.5;
  double height_m = 5.0;
  SweepStrategy strategy = SweepStrategy::Sequential;
  AdamParams adam;
  double opt_eps = 1e-4;
  int opt_max_iters = 5000;
  std::uint64_t codebook_seed = 7;
};

// Geometry of one panel in its local frame (u, v inward across the zone,
// z up, origin at the panel center). Every panel in the layout is congruent
// to this frame, so one codebook serves all of them.
class PanelContext {
 public:
  PanelContext(const RisParams& ris, const ChannelParams& channel,
               double zone_side_m = 40.0);

  int n_elements() const { return n_; }
  const Eigen::VectorXcd& h_br() const { return h_br_; }
  // RIS->UE per-element gains for a point in local zone coordinates.
  Eigen::VectorXcd h_ru_at(double u, double v) const;
  // 1 m sampling grid of a sub-zone (100 points), one row per point.
  Eigen::MatrixXcd h_ru_grid(int sub_zone) const;
  double zone_side() const { return zone_side_; }

 private:
  int n_ = 0;
  double zone_side_ = 40.0;
  double ue_dz_ = 0.0;  // UE height relative to the panel center
  double k_wave_ = 0.0;
  double pl_ref_fc_ghz_ = 10.0;
  double gnb_h_ = 25.0;
  double ue_h_ = 1.5;
  Eigen::Matrix<double, Eigen::Dynamic, 3> elem_;  // local element positions
  Eigen::VectorXcd h_br_;
};

// 16 per-sub-zone optimizations (full panel for Sequential, disjoint element
// groups of n/16 for Simultaneous).
RisCodebook build_codebook(const PanelContext& ctx, const RisParams& params);

// Mean |h_eff|^2 per sub-zone under the covering beam, plus the grid mean.
struct ZonePowerStats {
  std::vector<double> sub_zone_mean_gain;  // 16 linear gains
  double grid_mean_gain = 0.0;
};
ZonePowerStats zone_power_stats(const PanelContext& ctx, const RisCodebook& cb);

// Binary cache keyed by a caller-provided hash (config subset + strategy).
bool save_codebook(const std::string& path, const RisCodebook& cb, std::uint64_t key);
std::optional<RisCodebook> load_codebook(const std::string& path, std::uint64_t key);

}  // namespace risho
