#include "rishosim/handover.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "rishosim/channel.hpp"

namespace risho {

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::HO: return "HO";
    case EventKind::HOF: return "HOF";
    case EventKind::RLF: return "RLF";
    case EventKind::PP: return "PP";
    case EventKind::CellPrep: return "CellPrep";
    case EventKind::CellRelease: return "CellRelease";
  }
  return "?";
}

bool event_kind_from_string(const std::string& s, EventKind& out) {
  static const std::map<std::string, EventKind> table = {
      {"HO", EventKind::HO},           {"HOF", EventKind::HOF},
      {"RLF", EventKind::RLF},         {"PP", EventKind::PP},
      {"CellPrep", EventKind::CellPrep}, {"CellRelease", EventKind::CellRelease}};
  auto it = table.find(s);
  if (it == table.end()) return false;
  out = it->second;
  return true;
}

void UeSession::init(int ue_id, int n_sectors, const PredictionParams& pred,
                     double ssb_period_s) {
  ue = ue_id;
  filters.assign(n_sectors, FilterState(pred.l1_window, pred.l3_coefficient));
  has_filter.assign(n_sectors, 0);
  int lag = std::max(1, static_cast<int>(std::llround(pred.horizon_s / ssb_period_s)));
  predictors.assign(n_sectors, LmmsePredictor(pred.order_p, lag, pred.forgetting, pred.ridge));
}

bool UeSession::is_prepared(int sector) const {
  for (const auto& p : prepared)
    if (p.sector == sector) return true;
  return false;
}

double ranking_metric(const UeSession& s, int sector, const StepConfig& cfg) {
  if (!s.has_filter[sector]) return std::numeric_limits<double>::quiet_NaN();
  if (cfg.use_prediction && !cfg.prediction.force_passthrough) {
    return s.predictors[sector].predict().value;
  }
  return s.filters[sector].l3_value();
}

namespace {

double sinr_db_obs(const std::vector<SectorObs>& obs, int serving, double noise_mw) {
  double interference = 0.0;
  int group = serving % 3;
  for (int i = 0; i < static_cast<int>(obs.size()); ++i) {
    if (i != serving && i % 3 == group) interference += obs[i].rx_mw;
  }
  double signal = obs[serving].rx_mw;
  if (signal <= 0.0) return -300.0;
  return lin_to_db(signal / (noise_mw + interference));
}

int strongest_detectable(const std::vector<SectorObs>& obs) {
  int best = 0;
  double best_rsrp = -1e300;
  for (int i = 0; i < static_cast<int>(obs.size()); ++i) {
    if (obs[i].rsrp_dbm > best_rsrp) {
      best_rsrp = obs[i].rsrp_dbm;
      best = i;
    }
  }
  return best;
}

void release_all_prepared(UeSession& s, long tick, std::vector<HoEvent>& events) {
  for (const auto& p : s.prepared) {
    events.push_back({EventKind::CellRelease, tick, s.ue, s.serving, p.sector});
  }
  s.prepared.clear();
}

}  // namespace

void step(UeSession& s, long tick, bool ssb_tick, const MeasurementInput& m,
          const StepConfig& cfg, const TargetChooser& chooser,
          std::vector<HoEvent>& events) {
  const int n_sectors = static_cast<int>(m.delayed.size());
  if (s.serving < 0) throw std::logic_error("step: session has no serving sector");

  // (1)+(2) measurement intake on fresh delayed frames.
  if (ssb_tick) {
    for (int sec = 0; sec < n_sectors; ++sec) {
      if (!m.delayed[sec].detectable) continue;
      double l3 = s.filters[sec].update(m.delayed[sec].rsrp_dbm);
      s.has_filter[sec] = 1;
      if (cfg.use_prediction && !cfg.prediction.force_passthrough) {
        s.predictors[sec].observe(l3);
      }
    }
  }

  if (s.in_recovery(tick)) return;

  // (3) ranking metric and candidate set from the delayed view.
  std::vector<std::pair<double, int>> candidates;  // (metric, sector)
  for (int sec = 0; sec < n_sectors; ++sec) {
    if (sec == s.serving || !m.delayed[sec].detectable || !s.has_filter[sec]) continue;
    double metric = ranking_metric(s, sec, cfg);
    if (std::isnan(metric)) continue;
    candidates.emplace_back(metric, sec);
  }
  std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });

  // (4) reconcile the prepared set to the top-4 candidates.
  const std::size_t keep =
      std::min<std::size_t>(candidates.size(), static_cast<std::size_t>(cfg.ho.max_prepared));
  std::vector<int> wanted;
  for (std::size_t i = 0; i < keep; ++i) wanted.push_back(candidates[i].second);
  for (std::size_t i = 0; i < s.prepared.size();) {
    if (std::find(wanted.begin(), wanted.end(), s.prepared[i].sector) == wanted.end()) {
      events.push_back({EventKind::CellRelease, tick, s.ue, s.serving, s.prepared[i].sector});
      s.prepared.erase(s.prepared.begin() + static_cast<long>(i));
    } else {
      ++i;
    }
  }
  for (int sec : wanted) {
    if (!s.is_prepared(sec)) {
      events.push_back({EventKind::CellPrep, tick, s.ue, s.serving, sec});
      s.prepared.push_back({sec, tick});
    }
  }

  // (5) A3-style trigger with time-to-trigger on the best candidate.
  double serving_metric = ranking_metric(s, s.serving, cfg);
  const long ttt_ticks = std::max(1L, std::lround(cfg.ho.ttt_ms / cfg.tick_ms));
  bool condition = false;
  if (!candidates.empty() && !std::isnan(serving_metric)) {
    condition = candidates.front().first > serving_metric + cfg.ho.offset_db;
  }
  s.trigger_counter = condition ? s.trigger_counter + 1 : 0;

  if (condition && s.trigger_counter >= ttt_ticks) {
    // (6) target selection among prepared cells (prepared before this tick).
    std::vector<int> eligible;
    std::vector<double> eligible_metric;
    for (const auto& p : s.prepared) {
      if (p.prep_tick < tick && m.delayed[p.sector].detectable) {
        eligible.push_back(p.sector);
        eligible_metric.push_back(ranking_metric(s, p.sector, cfg));
      }
    }
    if (!eligible.empty()) {
      int target = -1;
      if (cfg.use_cmab && chooser) {
        target = chooser(s, eligible, eligible_metric);
      } else {
        double best = -1e300;
        for (std::size_t i = 0; i < eligible.size(); ++i) {
          if (eligible_metric[i] > best) {
            best = eligible_metric[i];
            target = eligible[i];
          }
        }
      }
      if (std::find(eligible.begin(), eligible.end(), target) == eligible.end())
        throw std::logic_error("execute_ho: target not prepared");

      // (7) execution outcome on the current-tick view.
      double target_rsrp = m.current[target].rsrp_dbm;
      double target_sinr = sinr_db_obs(m.current, target, m.noise_mw);
      if (target_rsrp < cfg.ho.receiver_sensitivity_dbm || target_sinr < cfg.ho.qout_db) {
        events.push_back({EventKind::HOF, tick, s.ue, s.serving, target});
        release_all_prepared(s, tick, events);
        s.serving = strongest_detectable(m.current);
        s.outage_ms += cfg.ho.rlf_recovery_ms;
        s.recovery_until_tick =
            tick + std::lround(cfg.ho.rlf_recovery_ms / cfg.tick_ms);
        s.trigger_counter = 0;
        s.oos_counter = 0;
      } else {
        int source = s.serving;
        events.push_back({EventKind::HO, tick, s.ue, source, target});
        bool pp = target == s.last_serving_before_ho &&
                  (tick - s.last_ho_tick) * cfg.tick_ms <= cfg.ho.pp_window_ms;
        if (pp) events.push_back({EventKind::PP, tick, s.ue, source, target});
        // Reservation ends when the target becomes serving.
        for (std::size_t i = 0; i < s.prepared.size(); ++i) {
          if (s.prepared[i].sector == target) {
            events.push_back({EventKind::CellRelease, tick, s.ue, source, target});
            s.prepared.erase(s.prepared.begin() + static_cast<long>(i));
            break;
          }
        }
        s.last_serving_before_ho = source;
        s.last_ho_tick = tick;
        s.serving = target;
        s.outage_ms += cfg.ho.interruption_ms;
        s.trigger_counter = 0;
        s.oos_counter = 0;
      }
      return;  // sync supervision resumes next tick on the new link
    }
  }

  // (8) out-of-sync / RLF supervision on the current view.
  double serving_rsrp = m.current[s.serving].rsrp_dbm;
  double serving_sinr = sinr_db_obs(m.current, s.serving, m.noise_mw);
  bool out_of_sync =
      serving_rsrp < cfg.ho.receiver_sensitivity_dbm || serving_sinr < cfg.ho.qout_db;
  if (out_of_sync) {
    ++s.oos_counter;
  } else if (serving_sinr > cfg.ho.qin_db) {
    s.oos_counter = 0;
  }
  if (s.oos_counter >= cfg.ho.n310) {
    int source = s.serving;
    int target = strongest_detectable(m.current);
    events.push_back({EventKind::RLF, tick, s.ue, source, target});
    release_all_prepared(s, tick, events);
    s.serving = target;
    s.outage_ms += cfg.ho.rlf_recovery_ms;
    s.recovery_until_tick = tick + std::lround(cfg.ho.rlf_recovery_ms / cfg.tick_ms);
    s.oos_counter = 0;
    s.trigger_counter = 0;
  }
}

double KpiValues::by_index(int i) const {
  switch (i) {
    case 0: return ho_per_min;
    case 1: return hof_per_min;
    case 2: return pp_per_min;
    case 3: return capacity_bps;
    case 4: return rlf_per_min;
    case 5: return reliability_pct;
    case 6: return prep_per_min;
    case 7: return resource_reservation_pct;
  }
  throw std::out_of_range("kpi index");
}

KpiValues kpis(const std::vector<HoEvent>& events, const std::vector<UeSummary>& ues,
               double duration_s, double tick_ms, int n_slots) {
  if (ues.empty()) throw std::invalid_argument("kpis: no UE summaries");
  const double minutes = duration_s / 60.0;
  const long max_tick = std::lround(duration_s * 1000.0 / tick_ms);
  const int n_ues = static_cast<int>(ues.size());

  long n_ho = 0, n_hof = 0, n_pp = 0, n_rlf = 0, n_prep = 0;
  // Open preparation intervals per (ue, sector).
  std::map<std::pair<int, int>, std::vector<long>> open;
  std::vector<double> prepared_ms(ues.size(), 0.0);

  for (const auto& e : events) {
    if (e.tick < 0 || e.tick > max_tick || e.ue < 0 || e.ue >= n_ues)
      throw std::invalid_argument("kpis: event outside the log span");
    switch (e.kind) {
      case EventKind::HO: ++n_ho; break;
      case EventKind::HOF: ++n_hof; break;
      case EventKind::PP: ++n_pp; break;
      case EventKind::RLF: ++n_rlf; break;
      case EventKind::CellPrep:
        ++n_prep;
        open[{e.ue, e.target}].push_back(e.tick);
        break;
      case EventKind::CellRelease: {
        auto& stack = open[{e.ue, e.target}];
        if (!stack.empty()) {
          prepared_ms[e.ue] += static_cast<double>(e.tick - stack.back()) * tick_ms;
          stack.pop_back();
        }
        break;
      }
    }
  }
  for (const auto& [key, stack] : open) {
    for (long t0 : stack)
      prepared_ms[key.first] += static_cast<double>(max_tick - t0) * tick_ms;
  }

  KpiValues k;
  const double denom = minutes * n_ues;
  k.ho_per_min = static_cast<double>(n_ho) / denom;
  k.hof_per_min = static_cast<double>(n_hof) / denom;
  k.pp_per_min = static_cast<double>(n_pp) / denom;
  k.rlf_per_min = static_cast<double>(n_rlf) / denom;
  k.prep_per_min = static_cast<double>(n_prep) / denom;

  double outage_ms = 0.0, capacity = 0.0, reserved = 0.0;
  for (const auto& u : ues) {
    if (std::abs(u.service_s - duration_s) > 1e-9)
      throw std::invalid_argument("kpis: summary span does not match the duration");
    outage_ms += u.outage_ms;
    capacity += u.capacity_mean_bps;
  }
  for (double ms : prepared_ms) reserved += ms;
  k.reliability_pct = 100.0 * (1.0 - outage_ms / (duration_s * 1000.0 * n_ues));
  k.capacity_bps = capacity / n_ues;
  k.resource_reservation_pct =
      100.0 * reserved / (duration_s * 1000.0 * n_slots * n_ues);
  return k;
}

std::string events_to_ndjson(const std::vector<HoEvent>& events) {
  std::ostringstream out;
  for (const auto& e : events) {
    nlohmann::json j;
    j["tick"] = e.tick;
    j["ue"] = e.ue;
    j["kind"] = to_string(e.kind);
    j["source"] = e.source;
    j["target"] = e.target;
    out << j.dump() << '\n';
  }
  return out.str();
}

std::vector<HoEvent> events_from_ndjson(const std::string& text) {
  std::vector<HoEvent> events;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line);
    if (!j.contains("kind")) continue;  // meta records are skipped
    HoEvent e;
    if (!event_kind_from_string(j.at("kind").get<std::string>(), e.kind))
      throw std::invalid_argument("unknown event kind: " + line);
    e.tick = j.at("tick").get<long>();
    e.ue = j.at("ue").get<int>();
    e.source = j.at("source").get<int>();
    e.target = j.at("target").get<int>();
    events.push_back(e);
  }
  return events;
}

std::string summaries_to_json(const std::vector<UeSummary>& ues) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& u : ues) {
    j.push_back({{"ue", u.ue},
                 {"outage_ms", u.outage_ms},
                 {"capacity_mean_bps", u.capacity_mean_bps},
                 {"service_s", u.service_s}});
  }
  return j.dump();
}

std::vector<UeSummary> summaries_from_json(const std::string& text) {
  std::vector<UeSummary> ues;
  nlohmann::json j = nlohmann::json::parse(text);
  for (const auto& item : j) {
    UeSummary u;
    u.ue = item.at("ue").get<int>();
    u.outage_ms = item.at("outage_ms").get<double>();
    u.capacity_mean_bps = item.at("capacity_mean_bps").get<double>();
    u.service_s = item.at("service_s").get<double>();
    ues.push_back(u);
  }
  return ues;
}

}  // namespace risho
