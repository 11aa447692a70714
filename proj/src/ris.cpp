#include "rishosim/ris.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "rishosim/rng.hpp"

namespace risho {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kLightSpeed = 299792458.0;

Eigen::VectorXcd unit_phasor(const Eigen::VectorXd& phi) {
  Eigen::VectorXcd w(phi.size());
  for (Eigen::Index i = 0; i < phi.size(); ++i) w[i] = std::polar(1.0, phi[i]);
  return w;
}
}  // namespace

void AdamState::update(Eigen::VectorXd& phi, const Eigen::VectorXd& grad,
                       const AdamParams& p) {
  ++step;
  m = p.beta1 * m + (1.0 - p.beta1) * grad;
  v = p.beta2 * v + (1.0 - p.beta2) * grad.cwiseProduct(grad);
  double bc1 = 1.0 - std::pow(p.beta1, step);
  double bc2 = 1.0 - std::pow(p.beta2, step);
  phi += p.lr * (m / bc1).cwiseQuotient(((v / bc2).cwiseSqrt().array() + p.eps).matrix());
}

double power_at(const Eigen::VectorXd& phi, const Eigen::VectorXcd& h_br,
                const Eigen::VectorXcd& h_ru) {
  return std::norm(cascaded_gain(h_br, h_ru, phi));
}

Eigen::VectorXd grad_phi(const Eigen::VectorXd& phi, const Eigen::VectorXcd& h_br,
                         const Eigen::VectorXcd& h_ru) {
  if (h_br.size() != h_ru.size() || h_br.size() != phi.size())
    throw std::invalid_argument("grad_phi: vector length mismatch");
  std::complex<double> h_eff = cascaded_gain(h_br, h_ru, phi);
  Eigen::VectorXd g(phi.size());
  for (Eigen::Index i = 0; i < phi.size(); ++i) {
    std::complex<double> c = h_ru[i] * h_br[i] * std::polar(1.0, phi[i]);
    g[i] = -2.0 * std::imag(std::conj(h_eff) * c);
  }
  return g;
}

void canonicalize_phases(Eigen::VectorXd& phi) {
  for (Eigen::Index i = 0; i < phi.size(); ++i) {
    double p = std::fmod(phi[i], 2.0 * kPi);
    if (p < 0.0) p += 2.0 * kPi;
    phi[i] = p;
  }
}

OptimizeResult optimize_zone(const Eigen::VectorXcd& h_br,
                             const Eigen::MatrixXcd& h_ru_grid,
                             const OptimizeOptions& options, std::mt19937_64& rng) {
  if (h_ru_grid.rows() == 0) throw std::invalid_argument("optimize_zone: empty grid");
  if (h_ru_grid.cols() != h_br.size())
    throw std::invalid_argument("optimize_zone: grid/h_br length mismatch");
  if (options.eps <= 0.0) throw std::invalid_argument("optimize_zone: eps must be positive");

  const Eigen::Index n = h_br.size();
  const Eigen::Index n_points = h_ru_grid.rows();

  // The optimal phases are invariant to amplitude scaling, but Adam's
  // numerical epsilon is not: physical path gains put the objective around
  // 1e-15 and freeze the update. Optimize at unit RMS amplitude and scale
  // the reported powers back.
  double s_br = std::sqrt(h_br.squaredNorm() / static_cast<double>(n));
  double s_ru = std::sqrt(h_ru_grid.squaredNorm() /
                          static_cast<double>(n * n_points));
  if (s_br <= 0.0) s_br = 1.0;
  if (s_ru <= 0.0) s_ru = 1.0;
  const double power_scale = (s_br * s_br) * (s_ru * s_ru);
  const Eigen::VectorXcd h_br_n = h_br / s_br;
  const Eigen::MatrixXcd grid_n = h_ru_grid / s_ru;

  Eigen::VectorXd phi(n);
  for (Eigen::Index i = 0; i < n; ++i) phi[i] = uniform(rng, 0.0, 2.0 * kPi);

  AdamState adam(n);
  OptimizeResult res;
  res.phi = phi;

  Eigen::VectorXcd weighted(n);
  Eigen::VectorXcd h_eff_all(n_points);

  double j_prev = 0.0;  // J_0 = 0 so the first iteration never satisfies eps
  double best_min = -1.0;
  int iter = 0;
  while (iter < options.max_iters) {
    weighted = unit_phasor(phi).cwiseProduct(h_br_n);
    h_eff_all.noalias() = grid_n * weighted;

    Eigen::Index b_min = 0;
    double p_min = std::numeric_limits<double>::infinity();
    for (Eigen::Index b = 0; b < n_points; ++b) {
      double p = std::norm(h_eff_all[b]);
      if (p < p_min) {
        p_min = p;
        b_min = b;
      }
    }
    double j_t = p_min;
    res.objective_trace.push_back(j_t);
    if (iter == 0) res.initial_min_power = p_min;
    if (p_min > best_min) {
      best_min = p_min;
      res.phi = phi;
    }
    ++iter;
    if (j_t > 0.0 && std::abs((j_t - j_prev) / j_t) < options.eps) {
      res.converged = true;
      break;
    }
    j_prev = j_t;

    // Gradient of the worst point only.
    std::complex<double> h_eff = h_eff_all[b_min];
    Eigen::VectorXd g(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      g[i] = -2.0 * std::imag(std::conj(h_eff) * grid_n(b_min, i) * weighted[i]);
    }
    adam.update(phi, g, options.adam);
  }

  res.iterations = iter;
  res.final_min_power = best_min * power_scale;
  res.initial_min_power *= power_scale;
  for (double& j : res.objective_trace) j *= power_scale;
  canonicalize_phases(res.phi);
  return res;
}

const char* to_string(SweepStrategy s) {
  return s == SweepStrategy::Sequential ? "sequential" : "simultaneous";
}

std::optional<SweepStrategy> sweep_strategy_from_string(const std::string& s) {
  if (s == "sequential") return SweepStrategy::Sequential;
  if (s == "simultaneous") return SweepStrategy::Simultaneous;
  return std::nullopt;
}

const Eigen::VectorXd& RisCodebook::active_config(int frame) const {
  if (strategy == SweepStrategy::Sequential) return entries[frame % 16];
  return entries[0];
}

std::vector<int> beam_schedule(const RisCodebook& codebook, int frame) {
  if (frame < 0) throw std::invalid_argument("beam_schedule: negative frame");
  if (codebook.strategy == SweepStrategy::Sequential) return {frame % 16};
  std::vector<int> all(16);
  for (int i = 0; i < 16; ++i) all[i] = i;
  return all;
}

PanelContext::PanelContext(const RisParams& ris, const ChannelParams& channel,
                           double zone_side_m)
    : n_(ris.n_elements),
      zone_side_(zone_side_m),
      pl_ref_fc_ghz_(channel.carrier_frequency_ghz),
      gnb_h_(channel.gnb_height_m),
      ue_h_(channel.ue_height_m) {
  if (n_ <= 0) throw std::invalid_argument("PanelContext: n_elements must be positive");
  double lambda = kLightSpeed / (channel.carrier_frequency_ghz * 1e9);
  k_wave_ = 2.0 * kPi / lambda;
  double spacing = ris.element_spacing_wavelengths * lambda;
  ue_dz_ = channel.ue_height_m - ris.height_m;

  // Uniform rectangular array: columns along the horizontal panel tangent
  // t = (1,-1,0)/sqrt(2), rows along z. Row-major element order, so the
  // contiguous Simultaneous groups are horizontal strips of the panel.
  int cols = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n_))));
  while (n_ % cols != 0) --cols;
  int rows = n_ / cols;
  elem_.resize(n_, 3);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      int i = r * cols + c;
      double t = spacing * (c - 0.5 * (cols - 1));
      double z = spacing * (r - 0.5 * (rows - 1));
      elem_(i, 0) = t * inv_sqrt2;
      elem_(i, 1) = -t * inv_sqrt2;
      elem_(i, 2) = z;
    }
  }

  // gNB sits at the cell center: local (+40, +40) horizontally.
  Eigen::Vector3d gnb(40.0, 40.0, channel.gnb_height_m - ris.height_m);
  double d_gnb = gnb.norm();
  double amp = std::sqrt(db_to_lin(-path_loss_db(std::max(d_gnb, 10.0), pl_ref_fc_ghz_,
                                                 gnb_h_, ue_h_)));
  Eigen::Vector3d dir = -gnb.normalized();  // propagation direction of the incident wave
  h_br_.resize(n_);
  for (int i = 0; i < n_; ++i) {
    double proj = dir.dot(elem_.row(i));
    h_br_[i] = std::polar(amp, -k_wave_ * proj);
  }
}

Eigen::VectorXcd PanelContext::h_ru_at(double u, double v) const {
  Eigen::Vector3d p(u, v, ue_dz_);
  double d_center = std::max(p.norm(), 10.0);
  double amp = std::sqrt(db_to_lin(-path_loss_db(d_center, pl_ref_fc_ghz_, gnb_h_, ue_h_)));
  Eigen::VectorXcd h(n_);
  for (int i = 0; i < n_; ++i) {
    double d = (p - elem_.row(i).transpose()).norm();
    h[i] = std::polar(amp, -k_wave_ * d);
  }
  return h;
}

Eigen::MatrixXcd PanelContext::h_ru_grid(int sub_zone) const {
  if (sub_zone < 0 || sub_zone > 15) throw std::invalid_argument("sub_zone out of range");
  double sub = zone_side_ / 4.0;
  double u0 = sub * (sub_zone % 4);
  double v0 = sub * (sub_zone / 4);
  Eigen::MatrixXcd grid(100, n_);
  int row = 0;
  for (int j = 0; j < 10; ++j) {
    for (int i = 0; i < 10; ++i) {
      grid.row(row++) = h_ru_at(u0 + i + 0.5, v0 + j + 0.5).transpose();
    }
  }
  return grid;
}

RisCodebook build_codebook(const PanelContext& ctx, const RisParams& params) {
  const int n = ctx.n_elements();
  RisCodebook cb;
  cb.strategy = params.strategy;
  cb.n_elements = n;
  cb.entries.assign(16, Eigen::VectorXd::Zero(n));
  cb.converged.assign(16, false);
  cb.min_power.assign(16, 0.0);

  OptimizeOptions opts;
  opts.adam = params.adam;
  opts.eps = params.opt_eps;
  opts.max_iters = params.opt_max_iters;

  if (params.strategy == SweepStrategy::Sequential) {
    cb.groups.assign(16, {0, n});
    for (int z = 0; z < 16; ++z) {
      auto rng = make_rng(substream_seed(params.codebook_seed, "codebook-seq", z));
      OptimizeResult r = optimize_zone(ctx.h_br(), ctx.h_ru_grid(z), opts, rng);
      cb.entries[z] = r.phi;
      cb.converged[z] = r.converged;
      cb.min_power[z] = r.final_min_power;
    }
    return cb;
  }

  if (n % 16 != 0)
    throw std::invalid_argument("simultaneous sweeping needs n_elements divisible by 16");
  int group_size = n / 16;
  Eigen::VectorXd combined = Eigen::VectorXd::Zero(n);
  cb.groups.resize(16);
  for (int z = 0; z < 16; ++z) {
    int begin = z * group_size;
    cb.groups[z] = {begin, begin + group_size};
    auto rng = make_rng(substream_seed(params.codebook_seed, "codebook-sim", z));
    Eigen::VectorXcd h_br_g = ctx.h_br().segment(begin, group_size);
    Eigen::MatrixXcd grid_g = ctx.h_ru_grid(z).middleCols(begin, group_size);
    OptimizeResult r = optimize_zone(h_br_g, grid_g, opts, rng);
    combined.segment(begin, group_size) = r.phi;
    cb.converged[z] = r.converged;
    cb.min_power[z] = r.final_min_power;
  }
  for (int z = 0; z < 16; ++z) cb.entries[z] = combined;
  return cb;
}

ZonePowerStats zone_power_stats(const PanelContext& ctx, const RisCodebook& cb) {
  ZonePowerStats stats;
  stats.sub_zone_mean_gain.assign(16, 0.0);
  double total = 0.0;
  for (int z = 0; z < 16; ++z) {
    Eigen::MatrixXcd grid = ctx.h_ru_grid(z);
    const Eigen::VectorXd& phi = cb.entries[z];
    Eigen::VectorXcd weighted(phi.size());
    for (Eigen::Index i = 0; i < phi.size(); ++i)
      weighted[i] = std::polar(1.0, phi[i]) * ctx.h_br()[i];
    Eigen::VectorXcd h_eff = grid * weighted;
    double mean = h_eff.squaredNorm() / static_cast<double>(grid.rows());
    stats.sub_zone_mean_gain[z] = mean;
    total += mean;
  }
  stats.grid_mean_gain = total / 16.0;
  return stats;
}

namespace {
constexpr char kCodebookMagic[8] = {'R', 'I', 'S', 'H', 'O', 'C', 'B', '1'};
}

bool save_codebook(const std::string& path, const RisCodebook& cb, std::uint64_t key) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) return false;
  f.write(kCodebookMagic, 8);
  auto put_u64 = [&](std::uint64_t v) { f.write(reinterpret_cast<const char*>(&v), 8); };
  put_u64(key);
  put_u64(static_cast<std::uint64_t>(cb.strategy));
  put_u64(static_cast<std::uint64_t>(cb.n_elements));
  for (int z = 0; z < 16; ++z) {
    put_u64(cb.converged[z] ? 1 : 0);
    f.write(reinterpret_cast<const char*>(&cb.min_power[z]), sizeof(double));
    f.write(reinterpret_cast<const char*>(cb.entries[z].data()),
            static_cast<std::streamsize>(sizeof(double)) * cb.n_elements);
  }
  return static_cast<bool>(f);
}

std::optional<RisCodebook> load_codebook(const std::string& path, std::uint64_t key) {
  std::ifstream f(path, std::ios::binary);
  if (!f) return std::nullopt;
  char magic[8];
  f.read(magic, 8);
  if (!f || std::memcmp(magic, kCodebookMagic, 8) != 0) return std::nullopt;
  auto get_u64 = [&]() {
    std::uint64_t v = 0;
    f.read(reinterpret_cast<char*>(&v), 8);
    return v;
  };
  if (get_u64() != key) return std::nullopt;
  RisCodebook cb;
  cb.strategy = static_cast<SweepStrategy>(get_u64());
  cb.n_elements = static_cast<int>(get_u64());
  if (cb.n_elements <= 0 || cb.n_elements > (1 << 24)) return std::nullopt;
  cb.entries.assign(16, Eigen::VectorXd::Zero(cb.n_elements));
  cb.converged.assign(16, false);
  cb.min_power.assign(16, 0.0);
  for (int z = 0; z < 16; ++z) {
    cb.converged[z] = get_u64() != 0;
    f.read(reinterpret_cast<char*>(&cb.min_power[z]), sizeof(double));
    f.read(reinterpret_cast<char*>(cb.entries[z].data()),
           static_cast<std::streamsize>(sizeof(double)) * cb.n_elements);
  }
  if (!f) return std::nullopt;
  int group_size = cb.n_elements / 16;
  cb.groups.resize(16);
  for (int z = 0; z < 16; ++z) {
    cb.groups[z] = cb.strategy == SweepStrategy::Sequential
                       ? std::pair<int, int>{0, cb.n_elements}
                       : std::pair<int, int>{z * group_size, (z + 1) * group_size};
  }
  return cb;
}

}  // namespace risho
