#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "rishosim/prediction.hpp"

namespace risho {

struct HoParams {
  double offset_db = 3.0;
  double ttt_ms = 100.0;
  int max_prepared = 4;
  double receiver_sensitivity_dbm = -95.0;
  int n310 = 6;
  double qout_db = -8.0;
  double qin_db = -6.0;
  double interruption_ms = 5.0;
  double rlf_recovery_ms = 200.0;
  double pp_window_ms = 1000.0;
  double report_delay_ms = 10.0;
  double decision_delay_ms = 10.0;
  double ssb_period_ms = 20.0;
};

enum class EventKind { HO, HOF, RLF, PP, CellPrep, CellRelease };
const char* to_string(EventKind kind);
bool event_kind_from_string(const std::string& s, EventKind& out);

struct HoEvent {
  EventKind kind = EventKind::HO;
  long tick = 0;
  int ue = 0;
  int source = -1;  // sector gid
  int target = -1;  // sector gid
};

struct SectorObs {
  double rsrp_dbm = -300.0;  // measured (max of direct and cascaded paths)
  double rx_mw = 0.0;        // received power incl. cascade, feeds SINR
  bool detectable = false;
};

struct MeasurementInput {
  // Pipeline-delayed view driving filters, ranking and triggers.
  std::vector<SectorObs> delayed;
  // Current-tick view driving sync supervision and execution checks.
  std::vector<SectorObs> current;
  double noise_mw = 0.0;
};

struct PreparedCell {
  int sector = -1;
  long prep_tick = 0;
};

struct UeSession {
  int ue = 0;
  int serving = -1;
  std::vector<PreparedCell> prepared;
  long last_ho_tick = std::numeric_limits<long>::min() / 4;
  int last_serving_before_ho = -1;
  int oos_counter = 0;
  long recovery_until_tick = -1;
  double outage_ms = 0.0;
  int trigger_counter = 0;
  std::vector<FilterState> filters;        // per sector
  std::vector<LmmsePredictor> predictors;  // per sector
  std::vector<char> has_filter;

  void init(int ue_id, int n_sectors, const PredictionParams& pred, double ssb_period_s);
  bool in_recovery(long tick) const { return tick < recovery_until_tick; }
  bool is_prepared(int sector) const;
};

struct StepConfig {
  HoParams ho;
  PredictionParams prediction;
  bool use_prediction = false;
  bool use_cmab = false;
  double tick_ms = 10.0;
};

// CMAB target selection hook: receives the eligible prepared sectors and
// their ranking metrics, returns the chosen sector gid.
using TargetChooser =
    std::function<int(const UeSession&, const std::vector<int>& eligible,
                      const std::vector<double>& metric_dbm)>;

// One simulation tick of the LTM state machine: filter/predictor intake,
// top-4 preparation reconcile, trigger evaluation, target selection,
// execution outcome and out-of-sync supervision. Appends emitted events.
void step(UeSession& s, long tick, bool ssb_tick, const MeasurementInput& m,
          const StepConfig& cfg, const TargetChooser& chooser,
          std::vector<HoEvent>& events);

// Ranking metric (predicted RSRP or L3 RSRP) for one sector; NaN when the
// sector has no filter history yet.
double ranking_metric(const UeSession& s, int sector, const StepConfig& cfg);

struct UeSummary {
  int ue = 0;
  double outage_ms = 0.0;
  double capacity_mean_bps = 0.0;  // mean over ticks of bw * log2(1+SINR), capped
  double service_s = 0.0;
};

struct KpiValues {
  double ho_per_min = 0.0;
  double hof_per_min = 0.0;
  double pp_per_min = 0.0;
  double capacity_bps = 0.0;
  double rlf_per_min = 0.0;
  double reliability_pct = 0.0;
  double prep_per_min = 0.0;
  double resource_reservation_pct = 0.0;

  double by_index(int i) const;
};

inline constexpr std::array<const char*, 8> kKpiNames = {
    "ho_per_min",  "hof_per_min",     "pp_per_min",   "capacity_bps",
    "rlf_per_min", "reliability_pct", "prep_per_min", "resource_reservation_pct"};

// KPI assembly from the event log and per-UE summaries. The same routine
// serves the live run and event-log replay, so replay is bit-exact.
KpiValues kpis(const std::vector<HoEvent>& events, const std::vector<UeSummary>& ues,
               double duration_s, double tick_ms, int n_slots = 4);

// Newline-delimited JSON with fixed field names {tick, ue, kind, source, target}.
std::string events_to_ndjson(const std::vector<HoEvent>& events);
std::vector<HoEvent> events_from_ndjson(const std::string& text);
std::string summaries_to_json(const std::vector<UeSummary>& ues);
std::vector<UeSummary> summaries_from_json(const std::string& text);

}  // namespace risho
