#include "rishosim/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "rishosim/rng.hpp"

namespace risho {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kLightSpeed = 299792458.0;

double wrap_deg(double a) {
  while (a > 180.0) a -= 360.0;
  while (a <= -180.0) a += 360.0;
  return a;
}
}  // namespace

double path_loss_db(double distance_3d_m, double fc_ghz, double h_bs_m, double h_ut_m) {
  if (distance_3d_m < 10.0)
    throw std::invalid_argument("path_loss_db: distance below 10 m model validity");
  if (fc_ghz <= 0.0) throw std::invalid_argument("path_loss_db: fc must be positive");

  double dh = h_bs_m - h_ut_m;
  double d2d = std::sqrt(std::max(distance_3d_m * distance_3d_m - dh * dh, 0.0));
  // Breakpoint with effective antenna heights (h_E = 1 m).
  double d_bp = 4.0 * (h_bs_m - 1.0) * (h_ut_m - 1.0) * (fc_ghz * 1e9) / kLightSpeed;
  if (d2d <= d_bp) {
    return 28.0 + 22.0 * std::log10(distance_3d_m) + 20.0 * std::log10(fc_ghz);
  }
  return 28.0 + 40.0 * std::log10(distance_3d_m) + 20.0 * std::log10(fc_ghz) -
         9.0 * std::log10(d_bp * d_bp + dh * dh);
}

double sector_gain_db(double azimuth_offset_deg, double elevation_offset_deg,
                      double beamwidth_deg, double max_attenuation_db,
                      double element_gain_dbi) {
  double az = wrap_deg(azimuth_offset_deg);
  double el = wrap_deg(elevation_offset_deg);
  double a_az = std::min(12.0 * (az / beamwidth_deg) * (az / beamwidth_deg),
                         max_attenuation_db);
  double a_el = std::min(12.0 * (el / beamwidth_deg) * (el / beamwidth_deg),
                         max_attenuation_db);
  double att = std::min(a_az + a_el, max_attenuation_db);
  return element_gain_dbi - att;
}

double noise_floor_dbm(double bandwidth_mhz, double noise_density_dbm_hz) {
  return noise_density_dbm_hz + 10.0 * std::log10(bandwidth_mhz * 1e6);
}

double spectral_efficiency(double sinr_db, double cap_bps_hz) {
  double se = std::log2(1.0 + db_to_lin(sinr_db));
  return std::min(se, cap_bps_hz);
}

ShadowingProcess::ShadowingProcess(double sigma_db, double decorr_m, std::uint64_t seed)
    : sigma_(sigma_db), decorr_(decorr_m), rng_(make_rng(seed)) {
  value_ = sigma_ * normal01(rng_);
}

void ShadowingProcess::advance(double delta_dist_m) {
  if (delta_dist_m <= 0.0) return;
  double rho = std::exp(-delta_dist_m / decorr_);
  value_ = rho * value_ + sigma_ * std::sqrt(1.0 - rho * rho) * normal01(rng_);
}

JakesFader::JakesFader(int n_oscillators, double fc_ghz, std::uint64_t seed) {
  auto rng = make_rng(seed);
  cos_alpha_.resize(n_oscillators);
  phase_.resize(n_oscillators);
  double rot = uniform01(rng);  // common random rotation, stratified arrivals
  for (int n = 0; n < n_oscillators; ++n) {
    double alpha = 2.0 * kPi * (n + rot) / n_oscillators;
    cos_alpha_[n] = std::cos(alpha);
    phase_[n] = uniform(rng, 0.0, 2.0 * kPi);
  }
  k_wave_ = 2.0 * kPi * fc_ghz * 1e9 / kLightSpeed;
  inv_sqrt_n_ = 1.0 / std::sqrt(static_cast<double>(n_oscillators));
}

std::complex<double> JakesFader::eval(double cum_dist_m) const {
  Eigen::ArrayXd ph = k_wave_ * cum_dist_m * cos_alpha_ + phase_;
  return {ph.cos().sum() * inv_sqrt_n_, ph.sin().sum() * inv_sqrt_n_};
}

std::complex<double> cascaded_gain(const Eigen::VectorXcd& h_br,
                                   const Eigen::VectorXcd& h_ru,
                                   const Eigen::VectorXd& theta) {
  if (h_br.size() != h_ru.size() || h_br.size() != theta.size())
    throw std::invalid_argument("cascaded_gain: vector length mismatch");
  std::complex<double> acc = 0.0;
  for (Eigen::Index i = 0; i < h_br.size(); ++i) {
    acc += h_ru[i] * std::polar(1.0, theta[i]) * h_br[i];
  }
  return acc;
}

std::complex<double> cascaded_gain(const CascadedLink& link) {
  return cascaded_gain(link.h_br, link.h_ru, link.theta);
}

double sinr_db_from_powers(const std::vector<double>& rx_mw, int serving_gid,
                           double noise_mw) {
  if (serving_gid < 0 || serving_gid >= static_cast<int>(rx_mw.size()))
    throw std::invalid_argument("sinr_db_from_powers: serving sector out of range");
  double interference = 0.0;
  int group = serving_gid % 3;
  for (int s = 0; s < static_cast<int>(rx_mw.size()); ++s) {
    if (s != serving_gid && s % 3 == group) interference += rx_mw[s];
  }
  return lin_to_db(rx_mw[serving_gid] / (noise_mw + interference));
}

ChannelState::ChannelState(const ChannelParams& params, const Layout& layout,
                           int n_ues, std::uint64_t seed)
    : params_(params), layout_(&layout), n_ues_(n_ues) {
  int n_cells = static_cast<int>(layout.cells.size());
  int n_sectors = static_cast<int>(layout.sectors.size());
  shadowing_.reserve(static_cast<std::size_t>(n_ues) * n_cells);
  faders_.reserve(static_cast<std::size_t>(n_ues) * n_sectors);
  for (int ue = 0; ue < n_ues; ++ue) {
    for (int c = 0; c < n_cells; ++c) {
      shadowing_.emplace_back(params.shadowing_std_db,
                              params.shadowing_decorrelation_m,
                              substream_seed(seed, "shadow", ue, c));
    }
    for (int s = 0; s < n_sectors; ++s) {
      faders_.emplace_back(params.jakes_oscillators, params.carrier_frequency_ghz,
                           substream_seed(seed, "jakes", ue, s));
    }
  }
}

void ChannelState::advance_shadowing(int ue, double delta_dist_m) {
  int n_cells = static_cast<int>(layout_->cells.size());
  for (int c = 0; c < n_cells; ++c) {
    shadowing_[static_cast<std::size_t>(ue) * n_cells + c].advance(delta_dist_m);
  }
}

double ChannelState::shadowing_db(int ue, int cell) const {
  int n_cells = static_cast<int>(layout_->cells.size());
  return shadowing_[static_cast<std::size_t>(ue) * n_cells + cell].value_db();
}

std::complex<double> ChannelState::fading(int ue, int sector_gid,
                                          double cum_dist_m) const {
  int n_sectors = static_cast<int>(layout_->sectors.size());
  return faders_[static_cast<std::size_t>(ue) * n_sectors + sector_gid].eval(cum_dist_m);
}

double ChannelState::direct_rsrp_mean_dbm(int sector_gid, Vec2 ue_pos,
                                          bool zone_attenuated) const {
  const Sector& sector = layout_->sectors[sector_gid];
  Vec2 site = layout_->cells[sector.cell].position;
  double d2d = std::max(distance(site, ue_pos), 0.1);
  double dh = params_.gnb_height_m - params_.ue_height_m;
  double d3d = std::hypot(d2d, dh);
  double az = std::atan2(ue_pos.y - site.y, ue_pos.x - site.x) * 180.0 / kPi;
  double el = std::atan2(dh, d2d) * 180.0 / kPi;
  double gain = sector_gain_db(az - sector.boresight_deg, el,
                               params_.sector_beamwidth_deg,
                               params_.sector_max_attenuation_db,
                               params_.sector_gain_dbi);
  double pl = path_loss_db(std::max(d3d, 10.0), params_.carrier_frequency_ghz,
                           params_.gnb_height_m, params_.ue_height_m);
  double rsrp = params_.tx_power_dbm + gain - pl;
  if (zone_attenuated) rsrp -= params_.zone_obstruction_db;
  return rsrp;
}

ChannelState::Rx ChannelState::direct_rx(int ue, int sector_gid, Vec2 ue_pos,
                                         double cum_dist_m, bool zone_attenuated) const {
  double mean_dbm = direct_rsrp_mean_dbm(sector_gid, ue_pos, zone_attenuated);
  double shadow = shadowing_db(ue, layout_->sectors[sector_gid].cell);
  double fade_pow = std::norm(fading(ue, sector_gid, cum_dist_m));
  double mw = db_to_lin(mean_dbm - shadow) * fade_pow;
  Rx rx;
  rx.mw = mw;
  rx.rsrp_dbm = mw > 0.0 ? lin_to_db(mw) : -300.0;
  return rx;
}

}  // namespace risho
