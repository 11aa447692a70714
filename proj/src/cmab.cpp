#include "rishosim/cmab.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace risho {

namespace {
constexpr double kPi = 3.14159265358979323846;

// J1(theta) = sin(theta) + (pi - theta) cos(theta), the order-1 angular part.
inline double arccos_angular(double cos_theta) {
  double c = std::clamp(cos_theta, -1.0, 1.0);
  double theta = std::acos(c);
  return std::sin(theta) + (kPi - theta) * c;
}
}  // namespace

double arccos_kernel(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != y.size()) throw std::invalid_argument("arccos_kernel: dimension mismatch");
  double nx = x.norm();
  double ny = y.norm();
  if (nx == 0.0 || ny == 0.0) return 0.0;
  return (nx * ny / kPi) * arccos_angular(x.dot(y) / (nx * ny));
}

FeatureScaler::FeatureScaler(int dim)
    : mean_(Eigen::VectorXd::Zero(dim)), m2_(Eigen::VectorXd::Zero(dim)) {}

void FeatureScaler::observe(const Eigen::VectorXd& x) {
  ++count_;
  Eigen::VectorXd delta = x - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta.cwiseProduct(x - mean_);
}

Eigen::VectorXd FeatureScaler::standardize(const Eigen::VectorXd& x) const {
  Eigen::VectorXd z = Eigen::VectorXd::Zero(x.size());
  if (count_ < 2) return z;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    double var = m2_[i] / static_cast<double>(count_ - 1);
    if (var > 1e-12) z[i] = (x[i] - mean_[i]) / std::sqrt(var);
  }
  return z;
}

KernelUcb::KernelUcb(const BanditParams& params) : params_(params) {
  if (params_.support_budget < 1) throw std::invalid_argument("support budget must be >= 1");
  if (params_.ridge_lambda <= 0.0) throw std::invalid_argument("ridge lambda must be > 0");
}

void KernelUcb::ensure_dim(Eigen::Index d) {
  if (dim_ >= 0) {
    if (d != dim_) throw std::invalid_argument("context dimension changed");
    return;
  }
  dim_ = d;
  const int w = params_.support_budget;
  support_.resize(d, w);
  support_norm_.resize(w);
  rewards_.resize(w);
  k_inv_.resize(w, w);
  evict_f_.resize(w);
  n_ = 0;
}

void KernelUcb::kernel_column(const Eigen::VectorXd& z, double z_norm,
                              Eigen::Ref<Eigen::VectorXd> out) const {
  // dots = S^T z in one pass, then the angular factor per entry.
  out.noalias() = support_.leftCols(n_).transpose() * z;
  for (Eigen::Index i = 0; i < n_; ++i) {
    double denom = support_norm_[i] * z_norm;
    if (denom == 0.0 || z_norm == 0.0) {
      out[i] = 0.0;
      continue;
    }
    out[i] = (denom / kPi) * arccos_angular(out[i] / denom);
  }
}

int KernelUcb::select(const std::vector<ArmContext>& contexts,
                      std::vector<ArmScore>* scores) const {
  if (contexts.empty()) throw std::invalid_argument("select: no candidate arms");
  const int n_arms = static_cast<int>(contexts.size());

  Eigen::MatrixXd kq;
  Eigen::MatrixXd wq;
  if (n_ > 0) {
    kq.resize(n_, n_arms);
    for (int a = 0; a < n_arms; ++a) {
      Eigen::VectorXd col(n_);
      kernel_column(contexts[a].z, contexts[a].z.norm(), col);
      kq.col(a) = col;
    }
    // One pass over the inverse for all arms.
    wq.noalias() = k_inv_.topLeftCorner(n_, n_).selfadjointView<Eigen::Lower>() * kq;
  }

  int best = 0;
  ArmScore best_score;
  if (scores) scores->clear();
  for (int a = 0; a < n_arms; ++a) {
    ArmScore s;
    s.arm = contexts[a].arm;
    double kxx = contexts[a].z.squaredNorm();  // k(x,x) for the order-1 kernel
    if (n_ == 0) {
      s.mu = 0.0;
      s.sigma = std::sqrt(kxx);
    } else {
      s.mu = reward_scale_ > 0.0
                 ? wq.col(a).dot(rewards_.head(n_)) / reward_scale_
                 : 0.0;
      s.sigma = std::sqrt(std::max(kxx - kq.col(a).dot(wq.col(a)), 0.0));
    }
    s.ucb = s.mu + params_.eta * s.sigma;
    if (scores) scores->push_back(s);
    if (a == 0) {
      best_score = s;
      continue;
    }
    bool better = s.ucb > best_score.ucb;
    if (s.ucb == best_score.ucb) {
      const ArmContext& cur = contexts[a];
      const ArmContext& prev = contexts[best];
      better = cur.rsrp_dbm > prev.rsrp_dbm ||
               (cur.rsrp_dbm == prev.rsrp_dbm && cur.arm < prev.arm);
    }
    if (better) {
      best = a;
      best_score = s;
    }
  }
  return best;
}

double KernelUcb::mu(const Eigen::VectorXd& z) const {
  if (n_ == 0 || reward_scale_ <= 0.0) return 0.0;
  Eigen::VectorXd k(n_);
  kernel_column(z, z.norm(), k);
  Eigen::VectorXd w = k_inv_.topLeftCorner(n_, n_).selfadjointView<Eigen::Lower>() * k;
  return w.dot(rewards_.head(n_)) / reward_scale_;
}

double KernelUcb::sigma(const Eigen::VectorXd& z) const {
  double kxx = z.squaredNorm();
  if (n_ == 0) return std::sqrt(kxx);
  Eigen::VectorXd k(n_);
  kernel_column(z, z.norm(), k);
  Eigen::VectorXd w = k_inv_.topLeftCorner(n_, n_).selfadjointView<Eigen::Lower>() * k;
  return std::sqrt(std::max(kxx - k.dot(w), 0.0));
}

void KernelUcb::rebuild_inverse() {
  Eigen::MatrixXd gram(n_, n_);
  for (Eigen::Index i = 0; i < n_; ++i) {
    for (Eigen::Index j = i; j < n_; ++j) {
      double denom = support_norm_[i] * support_norm_[j];
      double v = denom == 0.0
                     ? 0.0
                     : (denom / kPi) *
                           arccos_angular(support_.col(i).dot(support_.col(j)) / denom);
      gram(i, j) = v;
      gram(j, i) = v;
    }
  }
  gram.diagonal().array() += params_.ridge_lambda;
  k_inv_.topLeftCorner(n_, n_) = gram.llt().solve(Eigen::MatrixXd::Identity(n_, n_));
  updates_since_rebuild_ = 0;
}

void KernelUcb::update(const Eigen::VectorXd& z, double r) {
  if (!std::isfinite(r)) throw std::invalid_argument("update: reward must be finite");
  ensure_dim(z.size());
  reward_scale_ = std::max(reward_scale_, std::abs(r));

  if (n_ == params_.support_budget) {
    // FIFO eviction: remove the oldest point, downdate the inverse in place.
    // Writing column c from source column c+1 left to right never reads a
    // column that was already overwritten.
    double e = k_inv_(0, 0);
    evict_f_.head(n_ - 1) = k_inv_.col(0).segment(1, n_ - 1);
    for (Eigen::Index c = 0; c + 1 < n_; ++c) {
      k_inv_.col(c).head(n_ - 1) =
          k_inv_.col(c + 1).segment(1, n_ - 1) - (evict_f_[c] / e) * evict_f_.head(n_ - 1);
    }
    for (Eigen::Index i = 0; i + 1 < n_; ++i) {
      support_.col(i) = support_.col(i + 1);
      support_norm_[i] = support_norm_[i + 1];
      rewards_[i] = rewards_[i + 1];
    }
    --n_;
  }

  // Block append of the new point.
  Eigen::VectorXd k;
  double z_norm = z.norm();
  if (n_ > 0) {
    k.resize(n_);
    kernel_column(z, z_norm, k);
  }
  double kxx = z.squaredNorm() + params_.ridge_lambda;
  support_.col(n_) = z;
  support_norm_[n_] = z_norm;
  rewards_[n_] = r;
  ++n_;
  if (n_ == 1) {
    k_inv_(0, 0) = 1.0 / kxx;
    return;
  }
  Eigen::VectorXd b = k_inv_.topLeftCorner(n_ - 1, n_ - 1).selfadjointView<Eigen::Lower>() * k;
  double s = kxx - k.dot(b);
  if (s < 1e-12) s = 1e-12;
  auto top = k_inv_.topLeftCorner(n_ - 1, n_ - 1);
  top.noalias() += (b * b.transpose()) / s;
  k_inv_.col(n_ - 1).head(n_ - 1) = -b / s;
  k_inv_.row(n_ - 1).head(n_ - 1) = (-b / s).transpose();
  k_inv_(n_ - 1, n_ - 1) = 1.0 / s;

  if (++updates_since_rebuild_ >= 256) rebuild_inverse();
}

double reward(const RewardInputs& in) {
  double r = in.r_thr * (in.rlf ? 0.0 : 1.0);
  if (in.hof) r *= in.alpha_hof;
  if (in.ho) r *= in.alpha_ho;
  if (in.pp) r *= in.alpha_pp;
  return r;
}

}  // namespace risho
