#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "rishosim/geometry.hpp"

namespace risho {

struct ChannelParams {
  double carrier_frequency_ghz = 10.0;
  double bandwidth_mhz = 200.0;
  double tx_power_dbm = 25.0;
  double noise_density_dbm_hz = -174.0;
  double shadowing_std_db = 4.0;
  double shadowing_decorrelation_m = 37.0;
  int jakes_oscillators = 32;
  double gnb_height_m = 25.0;
  double ue_height_m = 1.5;
  double sector_gain_dbi = 3.0;
  double sector_beamwidth_deg = 65.0;
  double sector_max_attenuation_db = 30.0;
  double zone_obstruction_db = 20.0;
  double max_spectral_efficiency = 7.8;  // bps/Hz cap on log2(1+SINR)
};

// 3GPP TR 38.901 UMa LOS path loss, both distance branches. Distances below
// 10 m are outside the model validity and rejected.
double path_loss_db(double distance_3d_m, double fc_ghz, double h_bs_m = 25.0,
                    double h_ut_m = 1.5);

// Parabolic 3GPP element pattern, azimuth and elevation planes combined and
// clipped at the maximum attenuation, plus the element gain.
double sector_gain_db(double azimuth_offset_deg, double elevation_offset_deg,
                      double beamwidth_deg = 65.0, double max_attenuation_db = 30.0,
                      double element_gain_dbi = 3.0);

double noise_floor_dbm(double bandwidth_mhz, double noise_density_dbm_hz = -174.0);

inline double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }
inline double lin_to_db(double lin) { return 10.0 * std::log10(lin); }

// Spectral efficiency proxy for MCS throughput.
double spectral_efficiency(double sinr_db, double cap_bps_hz);

// Correlated log-normal shadowing along a trajectory (Gudmundson model):
// autocorrelation exp(-d/d_corr) in traveled distance, fixed marginal std.
class ShadowingProcess {
 public:
  ShadowingProcess() = default;
  ShadowingProcess(double sigma_db, double decorr_m, std::uint64_t seed);
  void advance(double delta_dist_m);
  double value_db() const { return value_; }

 private:
  double sigma_ = 4.0;
  double decorr_ = 37.0;
  double value_ = 0.0;
  std::mt19937_64 rng_;
};

// Rayleigh fading, Jakes Doppler spectrum, sum of sinusoids. The oscillator
// phase advances with traveled distance so time-varying speeds keep the
// classical J0(2 pi f_D tau) correlation at constant speed.
class JakesFader {
 public:
  JakesFader() = default;
  JakesFader(int n_oscillators, double fc_ghz, std::uint64_t seed);
  std::complex<double> eval(double cum_dist_m) const;
  double power(double cum_dist_m) const { return std::norm(eval(cum_dist_m)); }

 private:
  Eigen::ArrayXd cos_alpha_;
  Eigen::ArrayXd phase_;
  double k_wave_ = 0.0;  // 2 pi / wavelength
  double inv_sqrt_n_ = 1.0;
};

struct CascadedLink {
  Eigen::VectorXcd h_br;   // gNB -> RIS per-element gains
  Eigen::VectorXcd h_ru;   // RIS -> UE per-element gains
  Eigen::VectorXd theta;   // per-element phase shifts, radians
};

// Effective scalar gain sum_i h_ru,i * e^{j phi_i} * h_br,i. Rejects length
// mismatches; |result|^2 is the received power gain.
std::complex<double> cascaded_gain(const CascadedLink& link);
std::complex<double> cascaded_gain(const Eigen::VectorXcd& h_br,
                                   const Eigen::VectorXcd& h_ru,
                                   const Eigen::VectorXd& theta);

// SINR given per-sector received powers (mW). Interferers are the sectors
// sharing the serving sector's reuse group (global_id mod 3), serving excluded.
double sinr_db_from_powers(const std::vector<double>& rx_mw, int serving_gid,
                           double noise_mw);

// Per-replicate channel state: one shadowing process per (UE, cell) so
// co-site sectors stay fully correlated, one Jakes fader per (UE, sector).
class ChannelState {
 public:
  ChannelState(const ChannelParams& params, const Layout& layout, int n_ues,
               std::uint64_t seed);

  void advance_shadowing(int ue, double delta_dist_m);
  double shadowing_db(int ue, int cell) const;
  std::complex<double> fading(int ue, int sector_gid, double cum_dist_m) const;

  struct Rx {
    double rsrp_dbm = -300.0;
    double mw = 0.0;
  };
  // Direct gNB->UE link at the fading state implied by cum_dist. The zone
  // obstruction is applied when zone_attenuated is set.
  Rx direct_rx(int ue, int sector_gid, Vec2 ue_pos, double cum_dist_m,
               bool zone_attenuated) const;
  // Same composition with shadowing and fading forced to 0 dB.
  double direct_rsrp_mean_dbm(int sector_gid, Vec2 ue_pos, bool zone_attenuated) const;

  const ChannelParams& params() const { return params_; }
  const Layout& layout() const { return *layout_; }

 private:
  ChannelParams params_;
  const Layout* layout_ = nullptr;
  int n_ues_ = 0;
  std::vector<ShadowingProcess> shadowing_;  // [ue * n_cells + cell]
  std::vector<JakesFader> faders_;           // [ue * n_sectors + sector]
};

}  // namespace risho
