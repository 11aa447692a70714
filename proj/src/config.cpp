#include "rishosim/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "rishosim/rng.hpp"

namespace risho {

using nlohmann::json;

ConfigurationFlags flags_for_configuration(int index) {
  switch (index) {
    case 1: return {false, false, false};
    case 2: return {true, false, false};
    case 3: return {false, true, false};
    case 4: return {true, true, false};
    case 5: return {false, false, true};
    case 6: return {true, false, true};
    case 7: return {false, true, true};
    case 8: return {true, true, true};
  }
  throw std::invalid_argument("configuration index must be in 1..8");
}

std::string configuration_label(int index) {
  ConfigurationFlags f = flags_for_configuration(index);
  std::string label = "LTM";
  if (f.use_cmab) label += "+CMAB";
  if (f.use_prediction) label += "+LMMSE";
  if (f.use_ris) label += "+RIS";
  return label;
}

ScenarioConfig default_config() { return ScenarioConfig{}; }

namespace {

// Strict section reader: every consumed key is recorded, leftovers reject.
class Section {
 public:
  Section(const json& j, std::string prefix) : j_(j), prefix_(std::move(prefix)) {}

  template <typename T>
  void get(const char* key, T& field) {
    if (!j_.contains(key)) return;
    seen_.insert(key);
    try {
      field = j_.at(key).get<T>();
    } catch (const std::exception&) {
      throw std::invalid_argument("invalid value for " + prefix_ + "." + key);
    }
  }

  void get_strategy(const char* key, SweepStrategy& field) {
    if (!j_.contains(key)) return;
    seen_.insert(key);
    std::string s;
    try {
      s = j_.at(key).get<std::string>();
    } catch (const std::exception&) {
      throw std::invalid_argument("invalid value for " + prefix_ + "." + key);
    }
    auto parsed = sweep_strategy_from_string(s);
    if (!parsed)
      throw std::invalid_argument("invalid value for " + prefix_ + "." + key +
                                  " (expected sequential|simultaneous)");
    field = *parsed;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key()))
        throw std::invalid_argument("unknown key: " + prefix_ + "." + it.key());
    }
  }

 private:
  const json& j_;
  std::string prefix_;
  std::set<std::string> seen_;
};

void parse_channel(const json& j, ChannelParams& p) {
  Section s(j, "channel");
  s.get("carrier_frequency_ghz", p.carrier_frequency_ghz);
  s.get("bandwidth_mhz", p.bandwidth_mhz);
  s.get("tx_power_dbm", p.tx_power_dbm);
  s.get("noise_density_dbm_hz", p.noise_density_dbm_hz);
  s.get("shadowing_std_db", p.shadowing_std_db);
  s.get("shadowing_decorrelation_m", p.shadowing_decorrelation_m);
  s.get("jakes_oscillators", p.jakes_oscillators);
  s.get("gnb_height_m", p.gnb_height_m);
  s.get("ue_height_m", p.ue_height_m);
  s.get("sector_gain_dbi", p.sector_gain_dbi);
  s.get("sector_beamwidth_deg", p.sector_beamwidth_deg);
  s.get("sector_max_attenuation_db", p.sector_max_attenuation_db);
  s.get("zone_obstruction_db", p.zone_obstruction_db);
  s.get("max_spectral_efficiency", p.max_spectral_efficiency);
  s.finish();
}

void parse_topology(const json& j, TopologyParams& p) {
  Section s(j, "topology");
  s.get("n_cells", p.n_cells);
  s.get("inter_site_distance_m", p.inter_site_distance_m);
  s.get("reuse_factor", p.reuse_factor);
  s.get("speed_min_kmh", p.speed_min_kmh);
  s.get("speed_max_kmh", p.speed_max_kmh);
  s.finish();
}

void parse_ris(const json& j, RisParams& p) {
  Section s(j, "ris");
  s.get("n_elements", p.n_elements);
  s.get("element_spacing_wavelengths", p.element_spacing_wavelengths);
  s.get("height_m", p.height_m);
  s.get_strategy("strategy", p.strategy);
  s.get("adam_lr", p.adam.lr);
  s.get("adam_beta1", p.adam.beta1);
  s.get("adam_beta2", p.adam.beta2);
  s.get("adam_eps", p.adam.eps);
  s.get("opt_eps", p.opt_eps);
  s.get("opt_max_iters", p.opt_max_iters);
  s.get("codebook_seed", p.codebook_seed);
  s.finish();
}

void parse_prediction(const json& j, PredictionParams& p) {
  Section s(j, "prediction");
  s.get("l1_window", p.l1_window);
  s.get("l3_coefficient", p.l3_coefficient);
  s.get("order_p", p.order_p);
  s.get("forgetting", p.forgetting);
  s.get("ridge", p.ridge);
  s.get("horizon_s", p.horizon_s);
  s.get("force_passthrough", p.force_passthrough);
  s.finish();
}

void parse_bandit(const json& j, BanditParams& p) {
  Section s(j, "bandit");
  s.get("support_budget", p.support_budget);
  s.get("ridge_lambda", p.ridge_lambda);
  s.get("exploration_eta", p.eta);
  s.get("context_window_p", p.context_window_p);
  s.finish();
}

void parse_handover(const json& j, HoParams& p) {
  Section s(j, "handover");
  s.get("offset_db", p.offset_db);
  s.get("ttt_ms", p.ttt_ms);
  s.get("max_prepared", p.max_prepared);
  s.get("receiver_sensitivity_dbm", p.receiver_sensitivity_dbm);
  s.get("n310", p.n310);
  s.get("qout_db", p.qout_db);
  s.get("qin_db", p.qin_db);
  s.get("interruption_ms", p.interruption_ms);
  s.get("rlf_recovery_ms", p.rlf_recovery_ms);
  s.get("pp_window_ms", p.pp_window_ms);
  s.get("report_delay_ms", p.report_delay_ms);
  s.get("decision_delay_ms", p.decision_delay_ms);
  s.get("ssb_period_ms", p.ssb_period_ms);
  s.finish();
}

void parse_simulation(const json& j, SimulationParams& p) {
  Section s(j, "simulation");
  s.get("tick_ms", p.tick_ms);
  s.get("duration_s", p.duration_s);
  s.get("n_ues", p.n_ues);
  s.get("n_replicates", p.n_replicates);
  s.get("master_seed", p.master_seed);
  s.get("configurations", p.configurations);
  s.finish();
}

}  // namespace

ScenarioConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");

  ScenarioConfig cfg;
  static const std::set<std::string> sections = {
      "channel", "topology", "ris", "prediction", "bandit", "handover", "simulation"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!sections.count(it.key()))
      throw std::invalid_argument("unknown key: " + it.key());
  }
  if (j.contains("channel")) parse_channel(j["channel"], cfg.channel);
  if (j.contains("topology")) parse_topology(j["topology"], cfg.topology);
  if (j.contains("ris")) parse_ris(j["ris"], cfg.ris);
  if (j.contains("prediction")) parse_prediction(j["prediction"], cfg.prediction);
  if (j.contains("bandit")) parse_bandit(j["bandit"], cfg.bandit);
  if (j.contains("handover")) parse_handover(j["handover"], cfg.handover);
  if (j.contains("simulation")) parse_simulation(j["simulation"], cfg.simulation);
  validate(cfg);
  return cfg;
}

ScenarioConfig config_from_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open scenario file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return config_from_json_text(ss.str());
}

std::string config_to_json_text(const ScenarioConfig& cfg, int indent) {
  json j;
  j["channel"] = {{"carrier_frequency_ghz", cfg.channel.carrier_frequency_ghz},
                  {"bandwidth_mhz", cfg.channel.bandwidth_mhz},
                  {"tx_power_dbm", cfg.channel.tx_power_dbm},
                  {"noise_density_dbm_hz", cfg.channel.noise_density_dbm_hz},
                  {"shadowing_std_db", cfg.channel.shadowing_std_db},
                  {"shadowing_decorrelation_m", cfg.channel.shadowing_decorrelation_m},
                  {"jakes_oscillators", cfg.channel.jakes_oscillators},
                  {"gnb_height_m", cfg.channel.gnb_height_m},
                  {"ue_height_m", cfg.channel.ue_height_m},
                  {"sector_gain_dbi", cfg.channel.sector_gain_dbi},
                  {"sector_beamwidth_deg", cfg.channel.sector_beamwidth_deg},
                  {"sector_max_attenuation_db", cfg.channel.sector_max_attenuation_db},
                  {"zone_obstruction_db", cfg.channel.zone_obstruction_db},
                  {"max_spectral_efficiency", cfg.channel.max_spectral_efficiency}};
  j["topology"] = {{"n_cells", cfg.topology.n_cells},
                   {"inter_site_distance_m", cfg.topology.inter_site_distance_m},
                   {"reuse_factor", cfg.topology.reuse_factor},
                   {"speed_min_kmh", cfg.topology.speed_min_kmh},
                   {"speed_max_kmh", cfg.topology.speed_max_kmh}};
  j["ris"] = {{"n_elements", cfg.ris.n_elements},
              {"element_spacing_wavelengths", cfg.ris.element_spacing_wavelengths},
              {"height_m", cfg.ris.height_m},
              {"strategy", to_string(cfg.ris.strategy)},
              {"adam_lr", cfg.ris.adam.lr},
              {"adam_beta1", cfg.ris.adam.beta1},
              {"adam_beta2", cfg.ris.adam.beta2},
              {"adam_eps", cfg.ris.adam.eps},
              {"opt_eps", cfg.ris.opt_eps},
              {"opt_max_iters", cfg.ris.opt_max_iters},
              {"codebook_seed", cfg.ris.codebook_seed}};
  j["prediction"] = {{"l1_window", cfg.prediction.l1_window},
                     {"l3_coefficient", cfg.prediction.l3_coefficient},
                     {"order_p", cfg.prediction.order_p},
                     {"forgetting", cfg.prediction.forgetting},
                     {"ridge", cfg.prediction.ridge},
                     {"horizon_s", cfg.prediction.horizon_s},
                     {"force_passthrough", cfg.prediction.force_passthrough}};
  j["bandit"] = {{"support_budget", cfg.bandit.support_budget},
                 {"ridge_lambda", cfg.bandit.ridge_lambda},
                 {"exploration_eta", cfg.bandit.eta},
                 {"context_window_p", cfg.bandit.context_window_p}};
  j["handover"] = {{"offset_db", cfg.handover.offset_db},
                   {"ttt_ms", cfg.handover.ttt_ms},
                   {"max_prepared", cfg.handover.max_prepared},
                   {"receiver_sensitivity_dbm", cfg.handover.receiver_sensitivity_dbm},
                   {"n310", cfg.handover.n310},
                   {"qout_db", cfg.handover.qout_db},
                   {"qin_db", cfg.handover.qin_db},
                   {"interruption_ms", cfg.handover.interruption_ms},
                   {"rlf_recovery_ms", cfg.handover.rlf_recovery_ms},
                   {"pp_window_ms", cfg.handover.pp_window_ms},
                   {"report_delay_ms", cfg.handover.report_delay_ms},
                   {"decision_delay_ms", cfg.handover.decision_delay_ms},
                   {"ssb_period_ms", cfg.handover.ssb_period_ms}};
  j["simulation"] = {{"tick_ms", cfg.simulation.tick_ms},
                     {"duration_s", cfg.simulation.duration_s},
                     {"n_ues", cfg.simulation.n_ues},
                     {"n_replicates", cfg.simulation.n_replicates},
                     {"master_seed", cfg.simulation.master_seed},
                     {"configurations", cfg.simulation.configurations}};
  return indent > 0 ? j.dump(indent) : j.dump();
}

void validate(const ScenarioConfig& cfg) {
  auto fail = [](const std::string& field, const std::string& why) {
    throw std::invalid_argument("invalid config: " + field + " " + why);
  };
  if (cfg.channel.carrier_frequency_ghz <= 0) fail("channel.carrier_frequency_ghz", "must be > 0");
  if (cfg.channel.bandwidth_mhz <= 0) fail("channel.bandwidth_mhz", "must be > 0");
  if (cfg.channel.jakes_oscillators < 8) fail("channel.jakes_oscillators", "must be >= 8");
  if (cfg.channel.shadowing_std_db < 0) fail("channel.shadowing_std_db", "must be >= 0");
  if (cfg.channel.shadowing_decorrelation_m <= 0)
    fail("channel.shadowing_decorrelation_m", "must be > 0");
  if (cfg.topology.inter_site_distance_m <= 0)
    fail("topology.inter_site_distance_m", "must be > 0");
  if (cfg.topology.n_cells != 7) fail("topology.n_cells", "must be 7");
  if (cfg.topology.reuse_factor != 3) fail("topology.reuse_factor", "must be 3");
  if (cfg.topology.speed_min_kmh <= 0 || cfg.topology.speed_max_kmh < cfg.topology.speed_min_kmh)
    fail("topology.speed_min_kmh/speed_max_kmh", "must satisfy 0 < min <= max");
  if (cfg.ris.n_elements < 16 || cfg.ris.n_elements % 16 != 0)
    fail("ris.n_elements", "must be a positive multiple of 16");
  if (cfg.ris.opt_max_iters < 1) fail("ris.opt_max_iters", "must be >= 1");
  if (cfg.ris.opt_eps <= 0) fail("ris.opt_eps", "must be > 0");
  if (cfg.prediction.l1_window < 1) fail("prediction.l1_window", "must be >= 1");
  if (cfg.prediction.l3_coefficient <= 0 || cfg.prediction.l3_coefficient > 1)
    fail("prediction.l3_coefficient", "must be in (0,1]");
  if (cfg.prediction.order_p < 1) fail("prediction.order_p", "must be >= 1");
  if (cfg.prediction.forgetting <= 0 || cfg.prediction.forgetting > 1)
    fail("prediction.forgetting", "must be in (0,1]");
  if (cfg.prediction.horizon_s <= 0) fail("prediction.horizon_s", "must be > 0");
  if (cfg.bandit.support_budget < 1) fail("bandit.support_budget", "must be >= 1");
  if (cfg.bandit.ridge_lambda <= 0) fail("bandit.ridge_lambda", "must be > 0");
  if (cfg.bandit.eta < 0) fail("bandit.exploration_eta", "must be >= 0");
  if (cfg.bandit.context_window_p < 1) fail("bandit.context_window_p", "must be >= 1");
  if (cfg.handover.offset_db < 0) fail("handover.offset_db", "must be >= 0");
  if (cfg.handover.n310 < 1) fail("handover.n310", "must be >= 1");
  if (cfg.handover.max_prepared < 1) fail("handover.max_prepared", "must be >= 1");
  if (cfg.handover.qin_db < cfg.handover.qout_db)
    fail("handover.qin_db", "must be >= qout_db");
  if (cfg.simulation.tick_ms <= 0) fail("simulation.tick_ms", "must be > 0");
  if (cfg.simulation.duration_s <= 0) fail("simulation.duration_s", "must be > 0");
  if (cfg.simulation.n_ues < 1) fail("simulation.n_ues", "must be >= 1");
  if (cfg.simulation.n_replicates < 1) fail("simulation.n_replicates", "must be >= 1");
  if (cfg.simulation.configurations.empty())
    fail("simulation.configurations", "must not be empty");
  std::set<int> seen;
  for (int c : cfg.simulation.configurations) {
    if (c < 1 || c > 8) fail("simulation.configurations", "entries must be in 1..8");
    if (!seen.insert(c).second) fail("simulation.configurations", "entries must be unique");
  }
}

std::uint64_t config_hash(const ScenarioConfig& cfg) {
  return fnv1a64(config_to_json_text(cfg, 0));
}

std::string config_hash_hex(const ScenarioConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(config_hash(cfg)));
  return buf;
}

std::uint64_t codebook_key(const ScenarioConfig& cfg) {
  json j = {{"fc", cfg.channel.carrier_frequency_ghz},
            {"gnb_h", cfg.channel.gnb_height_m},
            {"ue_h", cfg.channel.ue_height_m},
            {"n_elements", cfg.ris.n_elements},
            {"spacing", cfg.ris.element_spacing_wavelengths},
            {"ris_h", cfg.ris.height_m},
            {"strategy", to_string(cfg.ris.strategy)},
            {"adam", {cfg.ris.adam.lr, cfg.ris.adam.beta1, cfg.ris.adam.beta2, cfg.ris.adam.eps}},
            {"eps", cfg.ris.opt_eps},
            {"max_iters", cfg.ris.opt_max_iters},
            {"seed", cfg.ris.codebook_seed}};
  return fnv1a64(j.dump());
}

}  // namespace risho
