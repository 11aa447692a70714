#pragma once

#include <cstddef>
#include <deque>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace risho {

struct PredictionParams {
  int l1_window = 5;
  double l3_coefficient = 0.5;  // a in F_n = (1-a) F_{n-1} + a M_n
  int order_p = 8;
  double forgetting = 0.999;
  double ridge = 1e-6;
  double horizon_s = 0.5;
  bool force_passthrough = false;
};

// Linear-domain mean of dBm samples, back in dBm.
double l1_linear_mean_dbm(std::span<const double> window_dbm);

// L1 sliding window feeding L3 exponential smoothing, both in the dB domain.
class FilterState {
 public:
  FilterState() = default;
  FilterState(int l1_window, double l3_coefficient);

  double update(double raw_dbm);  // returns the new L3 value
  double l1_value() const { return l1_; }
  double l3_value() const { return l3_; }
  bool initialized() const { return initialized_; }

 private:
  int window_ = 5;
  double a_ = 0.5;
  std::deque<double> raw_;
  double l1_ = 0.0;
  double l3_ = 0.0;
  bool initialized_ = false;
};

// Recursive LMMSE forecaster of the L3 series, lag_k samples ahead. Keeps
// exponentially weighted estimates of the lagged covariance and solves the
// ridge-regularized normal equations after every observation.
class LmmsePredictor {
 public:
  LmmsePredictor() = default;
  LmmsePredictor(int order_p, int lag_k, double forgetting, double ridge);

  void observe(double s);

  struct Prediction {
    double value = 0.0;
    bool cold = true;  // pass-through before warm-up
  };
  Prediction predict() const;

  bool has_weights() const { return has_weights_; }
  bool singular_flag() const { return singular_; }
  double w0() const { return w0_; }
  const Eigen::VectorXd& weights() const { return w_; }
  std::size_t observations() const { return count_; }

 private:
  int p_ = 8;
  int k_ = 1;
  double lambda_ = 0.99;
  double ridge_ = 1e-6;

  std::deque<double> hist_;  // newest last, holds p_ + k_ values
  std::size_t count_ = 0;
  double wsum_ = 0.0;
  Eigen::VectorXd mx_;
  double my_ = 0.0;
  Eigen::MatrixXd cxx_;
  Eigen::VectorXd cxy_;
  Eigen::VectorXd w_;
  double w0_ = 0.0;
  bool has_weights_ = false;
  bool singular_ = false;
  Eigen::MatrixXd reg_;
  Eigen::LDLT<Eigen::MatrixXd> ldlt_;
  Eigen::VectorXd x_buf_;
  Eigen::VectorXd dx_buf_;

  void solve();
};

// Smallest-MSE horizon over a recorded history; falls back to default_lag
// when the history cannot score any candidate.
int select_horizon(std::span<const double> history, std::span<const int> candidate_lags,
                   int order_p, double forgetting, double ridge, int default_lag);

}  // namespace risho
