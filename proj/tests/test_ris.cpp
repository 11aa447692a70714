#include "doctest.h"

#include <stdexcept>

#include <cmath>
#include <complex>
#include <cstdio>
#include <set>

#include "rishosim/ris.hpp"
#include "rishosim/rng.hpp"

using namespace risho;

namespace {

Eigen::VectorXcd random_unit_channel(std::mt19937_64& rng, int n) {
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v[i] = std::polar(1.0, uniform(rng, 0.0, 6.283185307));
  return v;
}

Eigen::VectorXcd random_gaussian_channel(std::mt19937_64& rng, int n) {
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i)
    v[i] = std::complex<double>(normal01(rng), normal01(rng)) / std::sqrt(2.0);
  return v;
}

}  // namespace

TEST_CASE("power_at basics") {
  auto rng = make_rng(1);
  SUBCASE("coherent 4-element case reaches 16") {
    Eigen::VectorXcd h_br = random_unit_channel(rng, 4);
    Eigen::VectorXcd h_ru = random_unit_channel(rng, 4);
    Eigen::VectorXd phi(4);
    for (int i = 0; i < 4; ++i) phi[i] = -std::arg(h_ru[i] * h_br[i]);
    CHECK(power_at(phi, h_br, h_ru) == doctest::Approx(16.0).epsilon(1e-12));
  }
  SUBCASE("global phase shift leaves the power unchanged") {
    Eigen::VectorXcd h_br = random_gaussian_channel(rng, 8);
    Eigen::VectorXcd h_ru = random_gaussian_channel(rng, 8);
    Eigen::VectorXd phi(8);
    for (int i = 0; i < 8; ++i) phi[i] = uniform(rng, 0.0, 6.28);
    double p0 = power_at(phi, h_br, h_ru);
    Eigen::VectorXd shifted = phi.array() + 1.2345;
    CHECK(power_at(shifted, h_br, h_ru) == doctest::Approx(p0).epsilon(1e-12));
  }
  SUBCASE("null channel gives zero") {
    Eigen::VectorXcd z = Eigen::VectorXcd::Zero(4);
    Eigen::VectorXcd h = Eigen::VectorXcd::Ones(4);
    CHECK(power_at(Eigen::VectorXd::Zero(4), h, z) == doctest::Approx(0.0));
  }
  SUBCASE("length mismatch rejected") {
    CHECK_THROWS_AS(power_at(Eigen::VectorXd::Zero(3), Eigen::VectorXcd::Ones(4),
                             Eigen::VectorXcd::Ones(4)),
                    std::invalid_argument);
  }
}

TEST_CASE("analytic gradient") {
  auto rng = make_rng(2);

  SUBCASE("zero at the coherent optimum") {
    Eigen::VectorXcd h_br = random_unit_channel(rng, 16);
    Eigen::VectorXcd h_ru = random_unit_channel(rng, 16);
    Eigen::VectorXd phi(16);
    for (int i = 0; i < 16; ++i) phi[i] = -std::arg(h_ru[i] * h_br[i]);
    CHECK(grad_phi(phi, h_br, h_ru).cwiseAbs().maxCoeff() < 1e-10);
  }

  SUBCASE("single element power is phase invariant") {
    Eigen::VectorXcd h = random_gaussian_channel(rng, 1);
    Eigen::VectorXcd g = random_gaussian_channel(rng, 1);
    Eigen::VectorXd phi(1);
    phi << 0.7;
    CHECK(std::abs(grad_phi(phi, h, g)[0]) < 1e-14);
  }

  SUBCASE("matches central finite differences on random instances") {
    // 100 instances spread over the three sizes; also the acceptance shape.
    const double h = 1e-6;
    for (int n : {2, 8, 64}) {
      for (int inst = 0; inst < 34; ++inst) {
        Eigen::VectorXcd h_br = random_gaussian_channel(rng, n);
        Eigen::VectorXcd h_ru = random_gaussian_channel(rng, n);
        Eigen::VectorXd phi(n);
        for (int i = 0; i < n; ++i) phi[i] = uniform(rng, 0.0, 6.28);
        Eigen::VectorXd g = grad_phi(phi, h_br, h_ru);
        for (int i = 0; i < n; ++i) {
          Eigen::VectorXd up = phi, dn = phi;
          up[i] += h;
          dn[i] -= h;
          double fd = (power_at(up, h_br, h_ru) - power_at(dn, h_br, h_ru)) / (2.0 * h);
          double scale = std::max(1.0, std::abs(fd));
          CHECK(std::abs(g[i] - fd) / scale < 1e-5);
        }
      }
    }
  }
}

TEST_CASE("canonicalize wraps into [0, 2pi)") {
  Eigen::VectorXd phi(3);
  phi << -0.1, 7.0, 100.0;
  canonicalize_phases(phi);
  for (int i = 0; i < 3; ++i) {
    CHECK(phi[i] >= 0.0);
    CHECK(phi[i] < 6.283185307179587);
  }
  CHECK(phi[0] == doctest::Approx(6.183185307179586));
}

TEST_CASE("optimize_zone") {
  OptimizeOptions opts;

  SUBCASE("single-point grid reaches the coherent bound") {
    auto rng = make_rng(11);
    const int n = 64;
    for (int seed = 0; seed < 3; ++seed) {
      Eigen::VectorXcd h_br = random_unit_channel(rng, n);
      Eigen::MatrixXcd grid(1, n);
      grid.row(0) = random_unit_channel(rng, n).transpose();
      double bound = 0.0;
      for (int i = 0; i < n; ++i) bound += std::abs(grid(0, i) * h_br[i]);
      bound *= bound;
      auto opt_rng = make_rng(substream_seed(1000, "opt", seed));
      OptimizeResult res = optimize_zone(h_br, grid, opts, opt_rng);
      double db_gap = 10.0 * std::log10(bound / res.final_min_power);
      CHECK(db_gap < 0.5);
      CHECK(res.final_min_power >= res.initial_min_power);
      CHECK(res.objective_trace.size() == static_cast<std::size_t>(res.iterations));
    }
  }

  SUBCASE("degenerate grid of identical points matches the single point") {
    auto rng = make_rng(12);
    const int n = 32;
    Eigen::VectorXcd h_br = random_unit_channel(rng, n);
    Eigen::VectorXcd h_ru = random_unit_channel(rng, n);
    Eigen::MatrixXcd one(1, n), hundred(100, n);
    one.row(0) = h_ru.transpose();
    for (int b = 0; b < 100; ++b) hundred.row(b) = h_ru.transpose();
    auto rng_a = make_rng(77);
    auto rng_b = make_rng(77);
    OptimizeResult a = optimize_zone(h_br, one, opts, rng_a);
    OptimizeResult b = optimize_zone(h_br, hundred, opts, rng_b);
    CHECK(a.final_min_power == doctest::Approx(b.final_min_power).epsilon(1e-12));
  }

  SUBCASE("objective never ends below the random start") {
    auto rng = make_rng(13);
    for (int inst = 0; inst < 5; ++inst) {
      const int n = 16;
      Eigen::VectorXcd h_br = random_gaussian_channel(rng, n);
      Eigen::MatrixXcd grid(7, n);
      for (int b = 0; b < 7; ++b) grid.row(b) = random_gaussian_channel(rng, n).transpose();
      auto opt_rng = make_rng(substream_seed(2000, "opt", inst));
      OptimizeResult res = optimize_zone(h_br, grid, opts, opt_rng);
      CHECK(res.final_min_power >= res.initial_min_power);
      Eigen::VectorXd phi = res.phi;
      for (int i = 0; i < n; ++i) {
        CHECK(phi[i] >= 0.0);
        CHECK(phi[i] < 6.283185307179587);
      }
    }
  }

  SUBCASE("empty grid and bad eps rejected") {
    auto rng = make_rng(1);
    Eigen::VectorXcd h = Eigen::VectorXcd::Ones(4);
    CHECK_THROWS_AS(optimize_zone(h, Eigen::MatrixXcd(0, 4), opts, rng),
                    std::invalid_argument);
    OptimizeOptions bad = opts;
    bad.eps = 0.0;
    CHECK_THROWS_AS(optimize_zone(h, Eigen::MatrixXcd::Ones(1, 4), bad, rng),
                    std::invalid_argument);
  }
}

TEST_CASE("codebook construction") {
  ChannelParams channel;
  RisParams ris;
  ris.n_elements = 256;  // desk size keeps this test quick
  ris.opt_max_iters = 400;
  PanelContext ctx(ris, channel);

  SUBCASE("sequential codebook has 16 full-panel entries") {
    ris.strategy = SweepStrategy::Sequential;
    RisCodebook cb = build_codebook(ctx, ris);
    CHECK(cb.entries.size() == 16);
    for (const auto& e : cb.entries) CHECK(e.size() == 256);
    for (const auto& g : cb.groups) {
      CHECK(g.first == 0);
      CHECK(g.second == 256);
    }
  }

  SUBCASE("simultaneous groups partition the elements") {
    ris.strategy = SweepStrategy::Simultaneous;
    RisCodebook cb = build_codebook(ctx, ris);
    CHECK(cb.entries.size() == 16);
    std::set<int> covered;
    for (const auto& g : cb.groups) {
      CHECK(g.second - g.first == 256 / 16);
      for (int i = g.first; i < g.second; ++i) {
        CHECK(covered.insert(i).second);  // disjoint
      }
    }
    CHECK(covered.size() == 256);
    // All 16 entries share the combined configuration.
    for (int z = 1; z < 16; ++z) CHECK(cb.entries[z] == cb.entries[0]);
  }

  SUBCASE("deterministic given the seed") {
    ris.strategy = SweepStrategy::Sequential;
    RisCodebook a = build_codebook(ctx, ris);
    RisCodebook b = build_codebook(ctx, ris);
    for (int z = 0; z < 16; ++z) CHECK(a.entries[z] == b.entries[z]);
  }
}

TEST_CASE("beam schedule") {
  RisCodebook cb;
  cb.strategy = SweepStrategy::Sequential;
  cb.n_elements = 16;
  cb.entries.assign(16, Eigen::VectorXd::Zero(16));

  SUBCASE("sequential cycles every entry twice over 32 frames") {
    std::vector<int> counts(16, 0);
    for (int f = 0; f < 32; ++f) {
      auto active = beam_schedule(cb, f);
      REQUIRE(active.size() == 1);
      ++counts[active[0]];
    }
    for (int c : counts) CHECK(c == 2);
  }
  SUBCASE("frame 17 maps to entry 1") {
    CHECK(beam_schedule(cb, 17)[0] == 1);
  }
  SUBCASE("simultaneous keeps all 16 beams active") {
    cb.strategy = SweepStrategy::Simultaneous;
    CHECK(beam_schedule(cb, 5).size() == 16);
  }
  SUBCASE("negative frame rejected") {
    CHECK_THROWS_AS(beam_schedule(cb, -1), std::invalid_argument);
  }
}

TEST_CASE("codebook cache round trip") {
  ChannelParams channel;
  RisParams ris;
  ris.n_elements = 64;
  ris.opt_max_iters = 50;
  PanelContext ctx(ris, channel);
  RisCodebook cb = build_codebook(ctx, ris);

  std::string path = "test_codebook_cache.bin";
  REQUIRE(save_codebook(path, cb, 0xabcdefULL));
  auto loaded = load_codebook(path, 0xabcdefULL);
  REQUIRE(loaded.has_value());
  CHECK(loaded->strategy == cb.strategy);
  CHECK(loaded->n_elements == cb.n_elements);
  for (int z = 0; z < 16; ++z) {
    CHECK(loaded->entries[z] == cb.entries[z]);
    CHECK(loaded->min_power[z] == cb.min_power[z]);
  }
  CHECK_FALSE(load_codebook(path, 0x123ULL).has_value());  // key mismatch
  std::remove(path.c_str());
}
