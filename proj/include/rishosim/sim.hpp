#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rishosim/config.hpp"
#include "rishosim/handover.hpp"
#include "rishosim/ris.hpp"

namespace risho {

struct ReplicateResult {
  KpiValues kpis;
  std::vector<HoEvent> events;
  std::vector<UeSummary> summaries;
  std::string decision_trace;  // NDJSON, filled when tracing was requested
  std::string channel_trace;   // CSV rows, filled when tracing was requested
};

struct ConfigurationResult {
  int configuration = 1;
  std::string label;
  std::vector<KpiValues> replicates;
  KpiValues mean;
  KpiValues ci_lo;
  KpiValues ci_hi;
};

struct KpiReport {
  std::string config_hash;
  int n_replicates = 0;
  std::vector<ConfigurationResult> rows;
};

struct TraceOptions {
  // Traces are recorded for the first requested configuration, replicate 0.
  bool channel = false;
  bool decisions = false;
  bool events = false;
};

struct RunOptions {
  std::string codebook_cache_dir;  // empty: build without touching disk
  int threads = 0;                 // 0: hardware concurrency
  bool keep_replicate_logs = false;
  TraceOptions trace;
};

struct ScenarioRunData {
  KpiReport report;
  // logs[row][replicate], filled when keep_replicate_logs or tracing is set
  std::vector<std::vector<ReplicateResult>> logs;
};

// One deterministic replicate of one configuration. The codebook is required
// when the configuration uses RIS.
ReplicateResult run_replicate(const ScenarioConfig& cfg, int configuration,
                              int replicate_index, const RisCodebook* codebook,
                              bool keep_logs, bool trace_channel = false,
                              bool trace_decisions = false);

ScenarioRunData run_scenario_full(const ScenarioConfig& cfg, const RunOptions& options);
KpiReport run_scenario(const ScenarioConfig& cfg, const RunOptions& options = {});

// Build the codebook for the configured strategy, through the file cache
// when a cache directory is given.
struct CodebookHandle {
  RisCodebook codebook;
  bool from_cache = false;
  std::string path;
};
CodebookHandle obtain_codebook(const ScenarioConfig& cfg, const std::string& cache_dir);

// Per-sub-zone mean received power over the 40x40 grid (the Fig. 3 style map).
std::string coverage_map_csv(const ScenarioConfig& cfg, const std::string& cache_dir);

std::string report_to_csv(const KpiReport& report);
std::string report_to_json_text(const KpiReport& report);
KpiReport report_from_json_text(const std::string& text);

// 95% CI half-width factor: Student t quantile over sqrt(n).
double t_quantile_975(int dof);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace risho
