#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rishosim/channel.hpp"
#include "rishosim/cmab.hpp"
#include "rishosim/geometry.hpp"
#include "rishosim/handover.hpp"
#include "rishosim/prediction.hpp"
#include "rishosim/ris.hpp"

namespace risho {

struct SimulationParams {
  double tick_ms = 10.0;
  double duration_s = 60.0;
  int n_ues = 50;
  int n_replicates = 10;
  std::uint64_t master_seed = 1;
  std::vector<int> configurations = {1, 2, 3, 4, 5, 6, 7, 8};
};

// Single source of truth for a run: every scenario parameter and every
// default the simulator consumes lives here.
struct ScenarioConfig {
  ChannelParams channel;
  TopologyParams topology;
  RisParams ris;
  PredictionParams prediction;
  BanditParams bandit;
  HoParams handover;
  SimulationParams simulation;
};

// The eight evaluated feature combinations.
struct ConfigurationFlags {
  bool use_ris = false;
  bool use_prediction = false;
  bool use_cmab = false;
};
ConfigurationFlags flags_for_configuration(int index);  // 1..8
std::string configuration_label(int index);

ScenarioConfig default_config();

// Strict parsing: unknown keys and malformed values raise invalid_argument
// naming the offending field.
ScenarioConfig config_from_json_text(const std::string& text);
ScenarioConfig config_from_file(const std::string& path);
std::string config_to_json_text(const ScenarioConfig& cfg, int indent = 2);

void validate(const ScenarioConfig& cfg);

// FNV-1a over the canonical serialization; embedded in all outputs.
std::uint64_t config_hash(const ScenarioConfig& cfg);
std::string config_hash_hex(const ScenarioConfig& cfg);

// Hash over the subset the RIS codebook depends on (cache key).
std::uint64_t codebook_key(const ScenarioConfig& cfg);

}  // namespace risho
