#include "doctest.h"

#include <stdexcept>

#include <cstdio>

#include "rishosim/config.hpp"
#include "rishosim/sim.hpp"

using namespace risho;

namespace {

ScenarioConfig tiny_config() {
  ScenarioConfig cfg;
  cfg.simulation.n_ues = 3;
  cfg.simulation.duration_s = 10.0;
  cfg.simulation.n_replicates = 2;
  cfg.simulation.configurations = {1};
  cfg.ris.n_elements = 64;
  cfg.ris.opt_max_iters = 60;
  return cfg;
}

}  // namespace

TEST_CASE("configuration flag triples enumerate the eight setups") {
  CHECK(configuration_label(1) == "LTM");
  CHECK(configuration_label(2) == "LTM+RIS");
  CHECK(configuration_label(3) == "LTM+LMMSE");
  CHECK(configuration_label(8) == "LTM+CMAB+LMMSE+RIS");
  ConfigurationFlags f8 = flags_for_configuration(8);
  CHECK(f8.use_ris);
  CHECK(f8.use_prediction);
  CHECK(f8.use_cmab);
  CHECK_THROWS_AS(flags_for_configuration(0), std::invalid_argument);
  CHECK_THROWS_AS(flags_for_configuration(9), std::invalid_argument);
}

TEST_CASE("config json round trip, validation, hashing") {
  ScenarioConfig cfg = default_config();

  SUBCASE("round trip preserves the hash") {
    std::string text = config_to_json_text(cfg);
    ScenarioConfig back = config_from_json_text(text);
    CHECK(config_hash(back) == config_hash(cfg));
  }

  SUBCASE("unknown keys are rejected by name") {
    CHECK_THROWS_WITH_AS(config_from_json_text("{\"nonsense\": 1}"),
                         doctest::Contains("unknown key: nonsense"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(config_from_json_text("{\"channel\": {\"bogus_field\": 2}}"),
                         doctest::Contains("channel.bogus_field"),
                         std::invalid_argument);
  }

  SUBCASE("invalid values name the field") {
    CHECK_THROWS_WITH_AS(
        config_from_json_text("{\"simulation\": {\"n_ues\": 0}}"),
        doctest::Contains("simulation.n_ues"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        config_from_json_text("{\"ris\": {\"strategy\": \"diagonal\"}}"),
        doctest::Contains("ris.strategy"), std::invalid_argument);
  }

  SUBCASE("any field change changes the hash") {
    ScenarioConfig other = cfg;
    other.handover.offset_db = 4.0;
    CHECK(config_hash(other) != config_hash(cfg));
    other = cfg;
    other.simulation.master_seed += 1;
    CHECK(config_hash(other) != config_hash(cfg));
  }
}

TEST_CASE("scenario runs are deterministic and well shaped") {
  ScenarioConfig cfg = tiny_config();
  RunOptions opts;

  SUBCASE("csv is byte-identical across reruns") {
    KpiReport a = run_scenario(cfg, opts);
    KpiReport b = run_scenario(cfg, opts);
    CHECK(report_to_csv(a) == report_to_csv(b));
    CHECK(a.config_hash == config_hash_hex(cfg));
  }

  SUBCASE("eight configurations produce 64 csv data rows") {
    ScenarioConfig all = tiny_config();
    all.simulation.n_ues = 2;
    all.simulation.duration_s = 5.0;
    all.simulation.n_replicates = 1;
    all.simulation.configurations = {1, 2, 3, 4, 5, 6, 7, 8};
    KpiReport report = run_scenario(all, opts);
    CHECK(report.rows.size() == 8);
    std::string csv = report_to_csv(report);
    long rows = std::count(csv.begin(), csv.end(), '\n') - 1;
    CHECK(rows == 64);
  }

  SUBCASE("report json round-trips") {
    KpiReport report = run_scenario(cfg, opts);
    KpiReport back = report_from_json_text(report_to_json_text(report));
    CHECK(report_to_csv(back) == report_to_csv(report));
  }

  SUBCASE("replicate kpis do not depend on which configurations run together") {
    ScenarioConfig solo = tiny_config();
    solo.simulation.configurations = {3};
    ScenarioConfig both = tiny_config();
    both.simulation.configurations = {1, 3};
    KpiReport a = run_scenario(solo, opts);
    KpiReport b = run_scenario(both, opts);
    for (int k = 0; k < 8; ++k) {
      CHECK(a.rows[0].replicates[0].by_index(k) == b.rows[1].replicates[0].by_index(k));
    }
  }
}

TEST_CASE("event log replay reproduces the kpi row bit-exactly") {
  ScenarioConfig cfg = tiny_config();
  RunOptions opts;
  opts.keep_replicate_logs = true;
  ScenarioRunData data = run_scenario_full(cfg, opts);
  const ReplicateResult& rep = data.logs[0][0];
  auto events = events_from_ndjson(events_to_ndjson(rep.events));
  auto ues = summaries_from_json(summaries_to_json(rep.summaries));
  KpiValues replay = kpis(events, ues, cfg.simulation.duration_s, cfg.simulation.tick_ms,
                          cfg.handover.max_prepared);
  for (int k = 0; k < 8; ++k) CHECK(replay.by_index(k) == rep.kpis.by_index(k));
}

TEST_CASE("prediction pass-through collapses configuration 3 onto 1") {
  ScenarioConfig cfg = tiny_config();
  cfg.prediction.force_passthrough = true;
  cfg.simulation.configurations = {1, 3};
  RunOptions opts;
  opts.keep_replicate_logs = true;
  ScenarioRunData data = run_scenario_full(cfg, opts);
  CHECK(events_to_ndjson(data.logs[0][0].events) ==
        events_to_ndjson(data.logs[1][0].events));
  for (int k = 0; k < 8; ++k)
    CHECK(data.logs[0][0].kpis.by_index(k) == data.logs[1][0].kpis.by_index(k));
}

TEST_CASE("ris configurations consume the codebook and cache") {
  ScenarioConfig cfg = tiny_config();
  cfg.simulation.configurations = {2};
  cfg.simulation.duration_s = 5.0;

  std::string cache = "test_sim_cache";
  CodebookHandle first = obtain_codebook(cfg, cache);
  CHECK_FALSE(first.from_cache);
  CodebookHandle second = obtain_codebook(cfg, cache);
  CHECK(second.from_cache);

  RunOptions opts;
  opts.codebook_cache_dir = cache;
  KpiReport report = run_scenario(cfg, opts);
  CHECK(report.rows.size() == 1);

  std::remove(first.path.c_str());
}

TEST_CASE("coverage map lists the 16 sub-zones") {
  ScenarioConfig cfg = tiny_config();
  std::string csv = coverage_map_csv(cfg, "");
  long rows = std::count(csv.begin(), csv.end(), '\n');
  CHECK(rows == 18);  // hash comment + header + 16 sub-zones
  CHECK(csv.find("# config_hash=") != std::string::npos);
  CHECK(csv.find("sub_zone,row,col,mean_gain_db,mean_power_dbm") != std::string::npos);
}

TEST_CASE("student t quantiles") {
  CHECK(t_quantile_975(9) == doctest::Approx(2.262));
  CHECK(t_quantile_975(19) == doctest::Approx(2.093));
  CHECK(t_quantile_975(1000) == doctest::Approx(1.96));
}
