#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace risho {

struct BanditParams {
  int support_budget = 500;   // W, FIFO-evicted
  double ridge_lambda = 1.0;  // lambda added to the Gram diagonal
  double eta = 0.1;           // exploration weight on sigma
  int context_window_p = 10;  // ticks averaged into the MCS/SINR features
};

// Order-1 arc-cosine kernel. Zero vectors map to 0 by convention.
double arccos_kernel(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// Running per-dimension standardization for the continuous context features.
class FeatureScaler {
 public:
  explicit FeatureScaler(int dim);
  void observe(const Eigen::VectorXd& x);
  Eigen::VectorXd standardize(const Eigen::VectorXd& x) const;

 private:
  Eigen::VectorXd mean_;
  Eigen::VectorXd m2_;
  std::size_t count_ = 0;
};

struct ArmContext {
  int arm = 0;          // global sector id (or synthetic arm index)
  double rsrp_dbm = 0;  // raw RSRP, used only for tie-breaking
  Eigen::VectorXd z;    // standardized features + unscaled one-hot block
};

struct ArmScore {
  int arm = 0;
  double ucb = 0.0;
  double mu = 0.0;
  double sigma = 0.0;
};

// KernelUCB over a shared kernel ridge regressor: one support set for all
// arms, arms enter through their context vectors. Rewards are normalized by
// a running max so eta keeps a stable scale.
class KernelUcb {
 public:
  explicit KernelUcb(const BanditParams& params);

  // Argmax of mu + eta*sigma; ties broken by highest rsrp, then lowest arm id.
  int select(const std::vector<ArmContext>& contexts,
             std::vector<ArmScore>* scores = nullptr) const;

  void update(const Eigen::VectorXd& z, double reward);

  double mu(const Eigen::VectorXd& z) const;
  double sigma(const Eigen::VectorXd& z) const;
  std::size_t support_size() const { return static_cast<std::size_t>(n_); }

 private:
  BanditParams params_;
  Eigen::Index dim_ = -1;
  Eigen::Index n_ = 0;          // current support size
  Eigen::MatrixXd support_;     // one column per support point
  Eigen::VectorXd support_norm_;
  Eigen::VectorXd rewards_;
  Eigen::MatrixXd k_inv_;       // (K + lambda I)^-1 over the active corner
  Eigen::VectorXd evict_f_;
  double reward_scale_ = 0.0;
  int updates_since_rebuild_ = 0;

  void ensure_dim(Eigen::Index d);
  void kernel_column(const Eigen::VectorXd& z, double z_norm,
                     Eigen::Ref<Eigen::VectorXd> out) const;
  void rebuild_inverse();
};

struct RewardInputs {
  double r_thr = 0.0;  // average throughput over the last 100 ms (bps)
  bool ho = false;
  bool hof = false;
  bool rlf = false;
  bool pp = false;
  double alpha_hof = 0.1;
  double alpha_ho = 0.8;
  double alpha_pp = 0.9;
};

// r = r_thr * (1 - I_RLF) * a_HOF^I_HOF * a_HO^I_HO * a_PP^I_PP
double reward(const RewardInputs& in);

}  // namespace risho
