#include "doctest.h"

#include <stdexcept>

#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "rishosim/cmab.hpp"
#include "rishosim/rng.hpp"

using namespace risho;

namespace {
constexpr double kPi = 3.14159265358979323846;

Eigen::VectorXd randn_vec(std::mt19937_64& rng, int d) {
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v[i] = normal01(rng);
  return v;
}
}  // namespace

TEST_CASE("arc-cosine kernel closed forms") {
  Eigen::VectorXd x(2), y(2);

  SUBCASE("k(x,x) equals the squared norm") {
    x << 2.0, 0.0;
    CHECK(arccos_kernel(x, x) == doctest::Approx(4.0).epsilon(1e-12));
    auto rng = make_rng(8);
    for (int i = 0; i < 20; ++i) {
      Eigen::VectorXd v = randn_vec(rng, 7);
      CHECK(arccos_kernel(v, v) ==
            doctest::Approx(v.squaredNorm()).epsilon(1e-12));
    }
  }
  SUBCASE("orthogonal unit vectors give 1/pi") {
    x << 1.0, 0.0;
    y << 0.0, 1.0;
    CHECK(arccos_kernel(x, y) == doctest::Approx(1.0 / kPi).epsilon(1e-12));
  }
  SUBCASE("opposite vectors give zero") {
    x << 0.3, -1.1;
    CHECK(arccos_kernel(x, -x) == doctest::Approx(0.0));
  }
  SUBCASE("zero vector convention") {
    x << 0.0, 0.0;
    y << 1.0, 2.0;
    CHECK(arccos_kernel(x, y) == 0.0);
  }
  SUBCASE("symmetry") {
    auto rng = make_rng(9);
    for (int i = 0; i < 25; ++i) {
      Eigen::VectorXd a = randn_vec(rng, 5), b = randn_vec(rng, 5);
      CHECK(arccos_kernel(a, b) == doctest::Approx(arccos_kernel(b, a)).epsilon(1e-14));
    }
  }
  SUBCASE("gram matrix over random contexts is psd") {
    auto rng = make_rng(10);
    const int n = 50;
    std::vector<Eigen::VectorXd> xs;
    for (int i = 0; i < n; ++i) xs.push_back(randn_vec(rng, 6));
    Eigen::MatrixXd gram(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) gram(i, j) = arccos_kernel(xs[i], xs[j]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-9);
  }
}

TEST_CASE("kernel ucb selection") {
  BanditParams params;
  params.eta = 0.5;

  SUBCASE("cold start ties break on the strongest rsrp") {
    KernelUcb bandit(params);
    std::vector<ArmContext> arms(3);
    for (int i = 0; i < 3; ++i) {
      arms[i].arm = 10 + i;
      arms[i].z = Eigen::VectorXd::Zero(4);
      arms[i].z[i] = 1.0;  // identical norms
      arms[i].rsrp_dbm = -80.0 + i;
    }
    CHECK(bandit.select(arms) == 2);
  }

  SUBCASE("observed high reward attracts with eta=0") {
    BanditParams greedy = params;
    greedy.eta = 0.0;
    KernelUcb bandit(greedy);
    Eigen::VectorXd xa(3), xb(3);
    xa << 1.0, 0.0, 0.0;
    xb << -1.0, 0.2, 0.9;
    for (int i = 0; i < 10; ++i) bandit.update(xa, 1.0);
    std::vector<ArmContext> arms(2);
    arms[0] = {0, -90.0, xa};
    arms[1] = {1, -60.0, xb};
    CHECK(bandit.select(arms) == 0);
    CHECK(bandit.mu(xa) > bandit.mu(xb));
  }

  SUBCASE("huge eta selects the least explored arm") {
    BanditParams explore = params;
    explore.eta = 1e6;
    KernelUcb bandit(explore);
    Eigen::VectorXd xa(3), xb(3);
    xa << 1.0, 0.0, 0.0;
    xb << 0.0, 1.0, 0.0;
    for (int i = 0; i < 20; ++i) bandit.update(xa, 1.0);
    std::vector<ArmContext> arms(2);
    arms[0] = {0, 0.0, xa};
    arms[1] = {1, 0.0, xb};
    CHECK(bandit.select(arms) == 1);
    CHECK(bandit.sigma(xb) > bandit.sigma(xa));
  }

  SUBCASE("no candidates rejected") {
    KernelUcb bandit(params);
    std::vector<ArmContext> none;
    CHECK_THROWS_AS(bandit.select(none), std::invalid_argument);
  }
}

TEST_CASE("kernel ucb updates") {
  BanditParams params;
  auto rng = make_rng(20);

  SUBCASE("posterior mean moves toward the observed reward") {
    KernelUcb bandit(params);
    Eigen::VectorXd x = randn_vec(rng, 4);
    double before = std::abs(bandit.mu(x) - 1.0);
    bandit.update(x, 1.0);
    double after = std::abs(bandit.mu(x) - 1.0);
    CHECK(after < before);
    for (int i = 0; i < 5; ++i) {
      before = after;
      bandit.update(x, 1.0);
      after = std::abs(bandit.mu(x) - 1.0);
      CHECK(after < before);
    }
  }

  SUBCASE("sigma shrinks after observing the context") {
    KernelUcb bandit(params);
    Eigen::VectorXd x = randn_vec(rng, 4);
    double pre = bandit.sigma(x);
    bandit.update(x, 0.4);
    CHECK(bandit.sigma(x) < pre);
  }

  SUBCASE("fifo eviction caps the support") {
    BanditParams small = params;
    small.support_budget = 8;
    KernelUcb bandit(small);
    for (int i = 0; i < 9; ++i) bandit.update(randn_vec(rng, 4), 0.1 * i);
    CHECK(bandit.support_size() == 8);
  }

  SUBCASE("reward scaling leaves the choice sequence unchanged") {
    for (double scale : {1.0, 1000.0}) {
      auto seq_rng = make_rng(31);
      KernelUcb bandit(params);
      std::vector<int> choices;
      for (int round = 0; round < 60; ++round) {
        std::vector<ArmContext> arms(3);
        for (int a = 0; a < 3; ++a) {
          arms[a].arm = a;
          arms[a].z = randn_vec(seq_rng, 4);
          arms[a].rsrp_dbm = a;
        }
        int pick = bandit.select(arms);
        choices.push_back(pick);
        double r = scale * (0.5 + 0.1 * pick + 0.05 * normal01(seq_rng));
        bandit.update(arms[pick].z, r);
      }
      static std::vector<int> reference;
      if (scale == 1.0) {
        reference = choices;
      } else {
        CHECK(choices == reference);
      }
    }
  }
}

TEST_CASE("reward follows the event-indicator product") {
  RewardInputs in;
  in.r_thr = 100.0;
  CHECK(reward(in) == doctest::Approx(100.0));
  in.rlf = true;
  CHECK(reward(in) == doctest::Approx(0.0));
  in.rlf = false;
  in.hof = true;
  CHECK(reward(in) == doctest::Approx(10.0));
  in.hof = false;
  in.ho = true;
  CHECK(reward(in) == doctest::Approx(80.0));
  in.pp = true;
  CHECK(reward(in) == doctest::Approx(72.0));
}

TEST_CASE("reward monotonicity: extra events never help") {
  auto rng = make_rng(55);
  for (int i = 0; i < 200; ++i) {
    RewardInputs in;
    in.r_thr = uniform(rng, 0.0, 500.0);
    in.ho = uniform01(rng) < 0.5;
    in.hof = uniform01(rng) < 0.5;
    in.rlf = uniform01(rng) < 0.5;
    in.pp = uniform01(rng) < 0.5;
    double base = reward(in);
    for (int flag = 0; flag < 4; ++flag) {
      RewardInputs more = in;
      if (flag == 0) more.ho = true;
      if (flag == 1) more.hof = true;
      if (flag == 2) more.rlf = true;
      if (flag == 3) more.pp = true;
      CHECK(reward(more) <= base + 1e-12);
    }
  }
}

TEST_CASE("bandit learns a synthetic contextual task") {
  // 4 arms, rewards linear in the context plus noise; regret should fall
  // well below the first-half level. Reduced horizon here; the acceptance
  // suite runs the full criterion.
  auto theta = Eigen::VectorXd(4);
  theta << 0.9, -0.4, 0.3, 0.2;
  double first = 0.0, second = 0.0;
  const int rounds = 1200;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    auto rng = make_rng(substream_seed(900, "regret", seed));
    BanditParams params;
    params.support_budget = 300;
    KernelUcb bandit(params);
    for (int round = 0; round < rounds; ++round) {
      std::vector<ArmContext> arms(4);
      double best = -1e9;
      for (int a = 0; a < 4; ++a) {
        arms[a].arm = a;
        arms[a].z = randn_vec(rng, 4);
        arms[a].rsrp_dbm = 0.0;
        best = std::max(best, theta.dot(arms[a].z));
      }
      int pick = bandit.select(arms);
      double value = theta.dot(arms[pick].z);
      double r = value + 0.1 * normal01(rng);
      bandit.update(arms[pick].z, r);
      double regret = best - value;
      (round < rounds / 2 ? first : second) += regret;
    }
  }
  CHECK(second < 0.7 * first);
}
