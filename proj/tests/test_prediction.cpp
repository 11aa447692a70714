#include "doctest.h"

#include <stdexcept>

#include <cmath>
#include <vector>

#include "rishosim/prediction.hpp"
#include "rishosim/rng.hpp"

using namespace risho;

namespace {

// AR(1) driver used as the analytic oracle: s_t = rho s_{t-1} + e_t.
struct Ar1 {
  double rho;
  double noise_std;
  double state = 0.0;
  std::mt19937_64 rng;
  Ar1(double r, double sigma_e, std::uint64_t seed) : rho(r), noise_std(sigma_e), rng(seed) {}
  double next() {
    state = rho * state + noise_std * normal01(rng);
    return state;
  }
  double stationary_var() const { return noise_std * noise_std / (1.0 - rho * rho); }
};

}  // namespace

TEST_CASE("l1 linear-domain window mean") {
  SUBCASE("constant window") {
    std::vector<double> w(5, -70.0);
    CHECK(l1_linear_mean_dbm(w) == doctest::Approx(-70.0));
  }
  SUBCASE("hand-computed mixed window") {
    // powers 1e-7, 1e-7, 0.5e-7 mW -> mean 0.8333e-7 -> -70.79 dBm
    std::vector<double> w = {-70.0, -70.0, 10.0 * std::log10(0.5e-7)};
    double expected = 10.0 * std::log10((1e-7 + 1e-7 + 0.5e-7) / 3.0);
    CHECK(l1_linear_mean_dbm(w) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(-70.79).epsilon(1e-3));
  }
  SUBCASE("single sample passes through") {
    std::vector<double> w = {-84.5};
    CHECK(l1_linear_mean_dbm(w) == doctest::Approx(-84.5));
  }
  SUBCASE("empty window rejected") {
    CHECK_THROWS_AS(l1_linear_mean_dbm({}), std::invalid_argument);
  }
}

TEST_CASE("l3 exponential smoothing") {
  SUBCASE("a=1 passthrough") {
    FilterState f(1, 1.0);
    CHECK(f.update(-70.0) == doctest::Approx(-70.0));
    CHECK(f.update(-90.0) == doctest::Approx(-90.0));
  }
  SUBCASE("midpoint update") {
    FilterState f(1, 0.5);
    f.update(-80.0);  // F0 = M0
    CHECK(f.update(-70.0) == doctest::Approx(-75.0));
  }
  SUBCASE("converges to a constant input") {
    FilterState f(1, 0.5);
    f.update(-100.0);
    double v = 0.0;
    for (int i = 0; i < 20; ++i) v = f.update(-60.0);
    CHECK(std::abs(v - (-60.0)) < 0.01);
  }
}

TEST_CASE("lmmse update and solve") {
  SUBCASE("iid zero-mean input drives weights to zero") {
    auto rng = make_rng(5);
    LmmsePredictor pred(4, 2, 0.999, 1e-6);
    for (int i = 0; i < 5000; ++i) pred.observe(normal01(rng));
    CHECK(pred.weights().norm() < 0.1);
    CHECK(std::abs(pred.w0()) < 0.1);
  }

  SUBCASE("ar(1) weight matches rho^k for p=1") {
    const double rho = 0.99;
    const int k = 5;
    Ar1 proc(rho, 0.2, 42);
    LmmsePredictor pred(1, k, 0.999, 1e-6);
    for (int i = 0; i < 3000; ++i) pred.observe(proc.next());
    double w_acc = 0.0;
    int n_acc = 0;
    for (int i = 0; i < 30000; ++i) {
      pred.observe(proc.next());
      w_acc += pred.weights()[0];
      ++n_acc;
    }
    double expected = std::pow(rho, k);
    CHECK(std::abs(w_acc / n_acc - expected) / expected < 0.1);
  }

  SUBCASE("deterministic ramp is perfectly predictable with p=2") {
    LmmsePredictor pred(2, 3, 1.0, 1e-9);
    const double slope = 0.25;
    double max_err = 1e9;
    for (int t = 0; t < 4000; ++t) {
      pred.observe(slope * t);
      auto pr = pred.predict();
      if (!pr.cold && t > 3000) {
        max_err = std::abs(pr.value - slope * (t + 3));
        CHECK(max_err < 0.01);
      }
    }
    CHECK(max_err < 0.01);
  }
}

TEST_CASE("lmmse prediction") {
  SUBCASE("constant history predicts the constant") {
    LmmsePredictor pred(3, 2, 0.99, 1e-6);
    for (int i = 0; i < 200; ++i) pred.observe(-71.5);
    auto pr = pred.predict();
    CHECK_FALSE(pr.cold);
    CHECK(std::abs(pr.value - (-71.5)) < 0.1);
  }

  SUBCASE("cold start passes through the last value") {
    LmmsePredictor pred(4, 3, 0.99, 1e-6);
    pred.observe(-80.0);
    pred.observe(-82.0);
    auto pr = pred.predict();
    CHECK(pr.cold);
    CHECK(pr.value == doctest::Approx(-82.0));
  }

  SUBCASE("ar(1) mse approaches the wiener bound") {
    for (double rho : {0.9, 0.99}) {
      const int k = 3;
      Ar1 proc(rho, 0.5, 7);
      LmmsePredictor pred(1, k, 0.999, 1e-6);
      for (int i = 0; i < 5000; ++i) pred.observe(proc.next());
      // Score predictions against realized values.
      std::vector<double> future(k, 0.0);
      double se = 0.0;
      long n = 0;
      std::vector<double> preds;
      std::vector<double> realized;
      for (int i = 0; i < 60000; ++i) {
        auto pr = pred.predict();
        preds.push_back(pr.value);
        double v = proc.next();
        realized.push_back(v);
        pred.observe(v);
      }
      for (std::size_t i = 0; i + k < preds.size(); ++i) {
        double err = preds[i] - realized[i + k - 1];
        se += err * err;
        ++n;
      }
      double mse = se / static_cast<double>(n);
      double wiener = (1.0 - std::pow(rho, 2 * k)) * proc.stationary_var();
      CHECK(mse <= 1.1 * wiener);
    }
  }

  SUBCASE("shift invariance: constant offset moves predictions by the offset") {
    auto run = [](double offset) {
      Ar1 proc(0.95, 0.3, 99);
      LmmsePredictor pred(4, 2, 1.0, 1e-9);
      double last = 0.0;
      for (int i = 0; i < 20000; ++i) {
        pred.observe(proc.next() + offset);
        last = pred.predict().value;
      }
      return last;
    };
    double base = run(0.0);
    double shifted = run(25.0);
    CHECK(std::abs(shifted - base - 25.0) < 1e-6);
  }
}

TEST_CASE("covariance estimate stays symmetric positive definite") {
  auto rng = make_rng(321);
  LmmsePredictor pred(6, 2, 0.99, 1e-6);
  for (int i = 0; i < 500; ++i) {
    pred.observe(normal01(rng) * 3.0 + 1.0);
    CHECK_FALSE(pred.singular_flag());
  }
  CHECK(pred.has_weights());
}

TEST_CASE("horizon selection") {
  SUBCASE("single candidate returned as-is") {
    std::vector<double> history(100, 0.0);
    std::vector<int> cands = {7};
    CHECK(select_horizon(history, cands, 2, 0.99, 1e-6, 3) == 7);
  }

  SUBCASE("ar(1) prefers the shortest horizon") {
    Ar1 proc(0.95, 0.5, 17);
    std::vector<double> history;
    for (int i = 0; i < 8000; ++i) history.push_back(proc.next());
    std::vector<int> cands = {2, 10, 40};
    CHECK(select_horizon(history, cands, 1, 0.999, 1e-6, 10) == 2);
  }

  SUBCASE("insufficient history falls back to the default") {
    std::vector<double> history(5, 1.0);
    std::vector<int> cands = {2, 4};
    CHECK(select_horizon(history, cands, 2, 0.99, 1e-6, 4) == 4);
  }
}
