#include "rishosim/prediction.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace risho {

double l1_linear_mean_dbm(std::span<const double> window_dbm) {
  if (window_dbm.empty()) throw std::invalid_argument("l1 window is empty");
  double acc = 0.0;
  for (double v : window_dbm) acc += std::pow(10.0, v / 10.0);
  return 10.0 * std::log10(acc / static_cast<double>(window_dbm.size()));
}

FilterState::FilterState(int l1_window, double l3_coefficient)
    : window_(l1_window), a_(l3_coefficient) {
  if (l1_window < 1) throw std::invalid_argument("l1 window must be >= 1");
  if (a_ <= 0.0 || a_ > 1.0) throw std::invalid_argument("l3 coefficient must be in (0,1]");
}

double FilterState::update(double raw_dbm) {
  raw_.push_back(raw_dbm);
  if (static_cast<int>(raw_.size()) > window_) raw_.pop_front();
  std::vector<double> w(raw_.begin(), raw_.end());
  l1_ = l1_linear_mean_dbm(w);
  if (!initialized_) {
    l3_ = l1_;
    initialized_ = true;
  } else {
    l3_ = (1.0 - a_) * l3_ + a_ * l1_;
  }
  return l3_;
}

LmmsePredictor::LmmsePredictor(int order_p, int lag_k, double forgetting, double ridge)
    : p_(order_p), k_(lag_k), lambda_(forgetting), ridge_(ridge) {
  if (p_ < 1) throw std::invalid_argument("predictor order must be >= 1");
  if (k_ < 1) throw std::invalid_argument("prediction lag must be >= 1");
  if (lambda_ <= 0.0 || lambda_ > 1.0)
    throw std::invalid_argument("forgetting must be in (0,1]");
  mx_ = Eigen::VectorXd::Zero(p_);
  cxx_ = Eigen::MatrixXd::Zero(p_, p_);
  cxy_ = Eigen::VectorXd::Zero(p_);
  w_ = Eigen::VectorXd::Zero(p_);
  reg_ = Eigen::MatrixXd::Zero(p_, p_);
  x_buf_ = Eigen::VectorXd::Zero(p_);
  dx_buf_ = Eigen::VectorXd::Zero(p_);
}

void LmmsePredictor::observe(double s) {
  hist_.push_back(s);
  ++count_;
  std::size_t need = static_cast<std::size_t>(p_ + k_);
  if (hist_.size() > need) hist_.pop_front();
  if (hist_.size() < need) return;

  // Training pair: x = p values ending lag_k samples ago, y = current value.
  for (int i = 0; i < p_; ++i) x_buf_[i] = hist_[i];
  double y = s;

  wsum_ = lambda_ * wsum_ + 1.0;
  double alpha = 1.0 / wsum_;
  dx_buf_ = x_buf_ - mx_;
  double dy = y - my_;
  mx_ += alpha * dx_buf_;
  my_ += alpha * dy;
  cxx_ *= (1.0 - alpha);
  cxx_.noalias() += ((1.0 - alpha) * alpha) * dx_buf_ * dx_buf_.transpose();
  cxy_ = (1.0 - alpha) * (cxy_ + alpha * dx_buf_ * dy);
  solve();
}

void LmmsePredictor::solve() {
  reg_ = cxx_;
  reg_.diagonal().array() += ridge_;
  ldlt_.compute(reg_);
  if (ldlt_.info() != Eigen::Success || !ldlt_.isPositive()) {
    singular_ = true;
    return;
  }
  Eigen::VectorXd w = ldlt_.solve(cxy_);
  if (!w.allFinite()) {
    singular_ = true;
    return;
  }
  w_ = w;
  w0_ = my_ - w_.dot(mx_);
  has_weights_ = true;
  singular_ = false;
}

LmmsePredictor::Prediction LmmsePredictor::predict() const {
  Prediction out;
  if (!has_weights_ || hist_.size() < static_cast<std::size_t>(p_ + k_)) {
    out.value = hist_.empty() ? 0.0 : hist_.back();
    out.cold = true;
    return out;
  }
  Eigen::VectorXd x(p_);
  std::size_t m = hist_.size();
  for (int i = 0; i < p_; ++i) x[i] = hist_[m - p_ + i];
  out.value = w0_ + w_.dot(x);
  out.cold = false;
  return out;
}

int select_horizon(std::span<const double> history, std::span<const int> candidate_lags,
                   int order_p, double forgetting, double ridge, int default_lag) {
  if (candidate_lags.empty()) return default_lag;
  if (candidate_lags.size() == 1) return candidate_lags[0];

  int best_lag = default_lag;
  double best_mse = std::numeric_limits<double>::infinity();
  for (int lag : candidate_lags) {
    if (lag < 1) continue;
    LmmsePredictor pred(order_p, lag, forgetting, ridge);
    double se = 0.0;
    std::size_t n_eval = 0;
    std::vector<double> pending(history.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t t = 0; t < history.size(); ++t) {
      if (!std::isnan(pending[t])) {
        double err = pending[t] - history[t];
        se += err * err;
        ++n_eval;
      }
      pred.observe(history[t]);
      auto pr = pred.predict();
      if (!pr.cold && t + static_cast<std::size_t>(lag) < history.size()) {
        pending[t + lag] = pr.value;
      }
    }
    if (n_eval >= 10) {
      double mse = se / static_cast<double>(n_eval);
      if (mse < best_mse) {
        best_mse = mse;
        best_lag = lag;
      }
    }
  }
  return best_lag;
}

}  // namespace risho
