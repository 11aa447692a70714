#include "rishosim/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "rishosim/cmab.hpp"
#include "rishosim/rng.hpp"

namespace risho {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Pending bandit reward: throughput window (t, t+window] plus event flags.
struct PendingReward {
  int ue = 0;
  long due_tick = 0;
  Eigen::VectorXd z;
  double throughput_sum = 0.0;
  int samples = 0;
  bool ho = false, hof = false, rlf = false, pp = false;
};

struct UeRuntime {
  Trajectory traj;
  UeSession session;
  std::vector<SectorObs> frame;            // held measurement view
  std::deque<std::vector<SectorObs>> ring; // delay pipeline
  double cascade_mw = 0.0;
  int cascade_panel = -1;
  // Per-sector windows feeding the bandit context features.
  std::vector<std::deque<double>> se_window;
  std::vector<std::deque<double>> sinr_window;
  double capacity_sum = 0.0;
};

double window_mean(const std::deque<double>& w) {
  if (w.empty()) return 0.0;
  double acc = 0.0;
  for (double v : w) acc += v;
  return acc / static_cast<double>(w.size());
}

}  // namespace

ReplicateResult run_replicate(const ScenarioConfig& cfg, int configuration,
                              int replicate_index, const RisCodebook* codebook,
                              bool keep_logs, bool trace_channel,
                              bool trace_decisions) {
  const ConfigurationFlags flags = flags_for_configuration(configuration);
  if (flags.use_ris && codebook == nullptr)
    throw std::invalid_argument("run_replicate: RIS configuration without a codebook");

  const Layout layout = build_layout(cfg.topology);
  const int n_sectors = static_cast<int>(layout.sectors.size());
  const int n_ues = cfg.simulation.n_ues;
  const double tick_ms = cfg.simulation.tick_ms;
  const double tick_s = tick_ms / 1000.0;
  const long n_ticks = std::lround(cfg.simulation.duration_s * 1000.0 / tick_ms);
  const long ssb_ticks = std::max(1L, std::lround(cfg.handover.ssb_period_ms / tick_ms));
  const long delay_ticks = std::max(
      0L, std::lround((cfg.handover.report_delay_ms + cfg.handover.decision_delay_ms) / tick_ms));
  const long reward_window_ticks = std::max(1L, std::lround(100.0 / tick_ms));
  const double noise_mw =
      db_to_lin(noise_floor_dbm(cfg.channel.bandwidth_mhz, cfg.channel.noise_density_dbm_hz));
  const double bw_hz = cfg.channel.bandwidth_mhz * 1e6;
  const double tx_mw = db_to_lin(cfg.channel.tx_power_dbm);

  const std::uint64_t seed = replicate_seed(cfg.simulation.master_seed, replicate_index);
  ChannelState channel(cfg.channel, layout, n_ues, seed);

  std::optional<PanelContext> panel_ctx;
  if (flags.use_ris) panel_ctx.emplace(cfg.ris, cfg.channel, layout.zone_side_m);

  StepConfig step_cfg;
  step_cfg.ho = cfg.handover;
  step_cfg.prediction = cfg.prediction;
  step_cfg.use_prediction = flags.use_prediction;
  step_cfg.use_cmab = flags.use_cmab;
  step_cfg.tick_ms = tick_ms;

  std::vector<UeRuntime> ues(n_ues);
  for (int u = 0; u < n_ues; ++u) {
    ues[u].traj = generate_trajectory(substream_seed(seed, "traj", u),
                                      cfg.simulation.duration_s, tick_s, layout,
                                      cfg.topology);
    ues[u].session.init(u, n_sectors, cfg.prediction, cfg.handover.ssb_period_ms / 1000.0);
    ues[u].frame.assign(n_sectors, SectorObs{});
    ues[u].se_window.resize(n_sectors);
    ues[u].sinr_window.resize(n_sectors);
  }

  // Shared bandit: one learner per replicate, updated in tick order.
  const int n_cells = static_cast<int>(layout.cells.size());
  const int n_continuous = 5;  // rsrp, mcs avg, sinr avg, speed, time since HO
  KernelUcb bandit(cfg.bandit);
  FeatureScaler scaler(n_continuous);
  std::vector<PendingReward> pending;

  std::vector<HoEvent> events;
  std::ostringstream decision_trace;
  std::ostringstream channel_trace;

  auto sinr_of = [&](const std::vector<SectorObs>& obs, int sector) {
    double interference = 0.0;
    for (int s = sector % 3; s < n_sectors; s += 3) {
      if (s != sector) interference += obs[s].rx_mw;
    }
    if (obs[sector].rx_mw <= 0.0) return -300.0;
    return lin_to_db(obs[sector].rx_mw / (noise_mw + interference));
  };

  std::vector<int> active_beams;
  auto measure = [&](int u, long tick) {
    UeRuntime& ue = ues[u];
    Vec2 pos = ue.traj.positions[tick];
    double cum = ue.traj.cum_dist_m[tick];
    auto zone = in_ris_zone(pos, layout);

    // Cascade bookkeeping: value is held while the UE stays in the same
    // panel's zone and refreshes only on frames illuminating its sub-zone.
    if (!zone || zone->panel != ue.cascade_panel) {
      ue.cascade_mw = 0.0;
      ue.cascade_panel = -1;
    }
    if (flags.use_ris && zone) {
      long frame_idx = tick / ssb_ticks;
      bool illuminated = std::find(active_beams.begin(), active_beams.end(),
                                   zone->sub_zone) != active_beams.end();
      if (illuminated) {
        Eigen::VectorXcd h_ru = panel_ctx->h_ru_at(zone->u, zone->v);
        std::complex<double> h_eff = cascaded_gain(
            panel_ctx->h_br(), h_ru, codebook->active_config(static_cast<int>(frame_idx % 16)));
        ue.cascade_mw = tx_mw * std::norm(h_eff);
        ue.cascade_panel = zone->panel;
      }
    }

    for (int s = 0; s < n_sectors; ++s) {
      ChannelState::Rx rx = channel.direct_rx(u, s, pos, cum, zone.has_value());
      SectorObs& obs = ue.frame[s];
      obs.rsrp_dbm = rx.rsrp_dbm;
      obs.rx_mw = rx.mw;
    }
    if (ue.cascade_panel >= 0) {
      int host = layout.panels[ue.cascade_panel].host_sector;
      SectorObs& obs = ue.frame[host];
      obs.rx_mw += ue.cascade_mw;
      obs.rsrp_dbm = std::max(obs.rsrp_dbm, lin_to_db(ue.cascade_mw));
    }
    for (int s = 0; s < n_sectors; ++s) {
      ue.frame[s].detectable = ue.frame[s].rsrp_dbm >= cfg.handover.receiver_sensitivity_dbm;
    }
  };

  // Initial frames and serving attachment.
  if (flags.use_ris) active_beams = beam_schedule(*codebook, 0);
  for (int u = 0; u < n_ues; ++u) {
    measure(u, 0);
    int best = 0;
    for (int s = 1; s < n_sectors; ++s) {
      if (ues[u].frame[s].rsrp_dbm > ues[u].frame[best].rsrp_dbm) best = s;
    }
    ues[u].session.serving = best;
  }

  // Context shared between the loop and the CMAB chooser for the current UE.
  struct ChooserCtx {
    const std::vector<SectorObs>* delayed = nullptr;
    long tick = 0;
    int ue = 0;
    double speed = 0.0;
  } chooser_ctx;

  TargetChooser chooser;
  if (flags.use_cmab) {
    chooser = [&](const UeSession& s, const std::vector<int>& eligible,
                  const std::vector<double>&) -> int {
      UeRuntime& ue = ues[chooser_ctx.ue];
      std::vector<ArmContext> contexts;
      std::vector<Eigen::VectorXd> raw;
      for (int sec : eligible) {
        Eigen::VectorXd x(n_continuous);
        x[0] = (*chooser_ctx.delayed)[sec].rsrp_dbm;
        x[1] = window_mean(ue.se_window[sec]);
        x[2] = window_mean(ue.sinr_window[sec]);
        x[3] = chooser_ctx.speed;
        double since_ho = std::max(0.0, (chooser_ctx.tick - s.last_ho_tick) * tick_s);
        x[4] = std::min(since_ho, chooser_ctx.tick * tick_s);
        raw.push_back(x);
        scaler.observe(x);
      }
      for (std::size_t i = 0; i < eligible.size(); ++i) {
        ArmContext c;
        c.arm = eligible[i];
        c.rsrp_dbm = (*chooser_ctx.delayed)[eligible[i]].rsrp_dbm;
        Eigen::VectorXd z(n_continuous + n_cells);
        z.head(n_continuous) = scaler.standardize(raw[i]);
        z.tail(n_cells).setZero();
        z[n_continuous + s.serving / 3] = 1.0;
        c.z = z;
        contexts.push_back(std::move(c));
      }
      std::vector<ArmScore> scores;
      int idx = bandit.select(contexts, &scores);

      PendingReward pr;
      pr.ue = chooser_ctx.ue;
      pr.due_tick = chooser_ctx.tick + reward_window_ticks;
      pr.z = contexts[idx].z;
      pending.push_back(std::move(pr));

      if (trace_decisions) {
        nlohmann::json j;
        j["type"] = "decision";
        j["tick"] = chooser_ctx.tick;
        j["ue"] = chooser_ctx.ue;
        nlohmann::json arms = nlohmann::json::array();
        for (const auto& sc : scores) {
          arms.push_back({{"arm", sc.arm}, {"ucb", sc.ucb}, {"mu", sc.mu}, {"sigma", sc.sigma}});
        }
        j["candidates"] = arms;
        j["chosen"] = contexts[idx].arm;
        decision_trace << j.dump() << '\n';
      }
      return contexts[idx].arm;
    };
  }

  MeasurementInput input;
  for (long tick = 0; tick < n_ticks; ++tick) {
    bool ssb_tick = tick % ssb_ticks == 0;
    if (flags.use_ris && ssb_tick)
      active_beams = beam_schedule(*codebook, static_cast<int>((tick / ssb_ticks) % 16));
    for (int u = 0; u < n_ues; ++u) {
      UeRuntime& ue = ues[u];
      if (tick > 0) {
        channel.advance_shadowing(u, ue.traj.cum_dist_m[tick] - ue.traj.cum_dist_m[tick - 1]);
        if (ssb_tick) measure(u, tick);
      }
      ue.ring.push_back(ue.frame);
      if (static_cast<long>(ue.ring.size()) > delay_ticks + 1) ue.ring.pop_front();

      input.delayed = ue.ring.front();
      input.current = ue.frame;
      input.noise_mw = noise_mw;
      bool delayed_fresh =
          tick >= delay_ticks ? (tick - delay_ticks) % ssb_ticks == 0 : tick == 0;

      chooser_ctx = {&input.delayed, tick, u, ue.traj.speed_mps[tick]};
      std::size_t before = events.size();
      step(ue.session, tick, delayed_fresh, input, step_cfg, chooser, events);

      // Per-sector context windows (bandit features).
      if (flags.use_cmab) {
        for (int s = 0; s < n_sectors; ++s) {
          double sinr = sinr_of(ue.frame, s);
          double se = spectral_efficiency(sinr, cfg.channel.max_spectral_efficiency);
          ue.se_window[s].push_back(se);
          ue.sinr_window[s].push_back(sinr);
          if (static_cast<int>(ue.se_window[s].size()) > cfg.bandit.context_window_p) {
            ue.se_window[s].pop_front();
            ue.sinr_window[s].pop_front();
          }
        }
      }

      // Tick capacity on the (possibly new) serving link.
      bool ho_this_tick = false;
      for (std::size_t e = before; e < events.size(); ++e) {
        if (events[e].kind == EventKind::HO) ho_this_tick = true;
      }
      double cap = 0.0;
      if (!ue.session.in_recovery(tick)) {
        double sinr = sinr_of(ue.frame, ue.session.serving);
        cap = bw_hz * spectral_efficiency(sinr, cfg.channel.max_spectral_efficiency);
        if (ho_this_tick) cap *= 1.0 - cfg.handover.interruption_ms / tick_ms;
      }
      ue.capacity_sum += cap;

      // Feed pending rewards: flags from this UE's new events, throughput
      // samples from the ticks inside each window.
      if (flags.use_cmab) {
        for (auto& pr : pending) {
          if (pr.ue != u) continue;
          for (std::size_t e = before; e < events.size(); ++e) {
            if (events[e].tick > pr.due_tick) continue;
            switch (events[e].kind) {
              case EventKind::HO: pr.ho = true; break;
              case EventKind::HOF: pr.hof = true; pr.ho = false; break;
              case EventKind::RLF: pr.rlf = true; break;
              case EventKind::PP: pr.pp = true; break;
              default: break;
            }
          }
          if (tick > pr.due_tick - reward_window_ticks && tick <= pr.due_tick) {
            pr.throughput_sum += cap;
            ++pr.samples;
          }
        }
        for (std::size_t i = 0; i < pending.size();) {
          if (pending[i].ue == u && tick >= pending[i].due_tick) {
            PendingReward pr = std::move(pending[i]);
            pending.erase(pending.begin() + static_cast<long>(i));
            RewardInputs ri;
            ri.r_thr = pr.samples > 0 ? pr.throughput_sum / pr.samples : 0.0;
            ri.ho = pr.ho;
            ri.hof = pr.hof;
            ri.rlf = pr.rlf;
            ri.pp = pr.pp;
            double r = reward(ri);
            bandit.update(pr.z, r);
            if (trace_decisions) {
              nlohmann::json j;
              j["type"] = "reward";
              j["tick"] = tick;
              j["ue"] = u;
              j["reward"] = r;
              j["r_thr"] = ri.r_thr;
              decision_trace << j.dump() << '\n';
            }
          } else {
            ++i;
          }
        }
      }

      if (trace_channel && ssb_tick) {
        for (int s = 0; s < n_sectors; ++s) {
          channel_trace << tick << ',' << u << ',' << s << ','
                        << fmt_double(ue.frame[s].rsrp_dbm) << ','
                        << fmt_double(sinr_of(ue.frame, s)) << '\n';
        }
      }
    }
  }

  ReplicateResult result;
  result.summaries.reserve(n_ues);
  for (int u = 0; u < n_ues; ++u) {
    UeSummary s;
    s.ue = u;
    s.outage_ms = ues[u].session.outage_ms;
    s.capacity_mean_bps = ues[u].capacity_sum / static_cast<double>(n_ticks);
    s.service_s = cfg.simulation.duration_s;
    result.summaries.push_back(s);
  }
  result.kpis = kpis(events, result.summaries, cfg.simulation.duration_s, tick_ms,
                     cfg.handover.max_prepared);
  if (keep_logs || trace_channel || trace_decisions) {
    result.events = std::move(events);
    result.decision_trace = decision_trace.str();
    result.channel_trace = channel_trace.str();
  }
  return result;
}

namespace {

KpiValues kpi_map(const std::vector<KpiValues>& reps,
                  const std::function<double(std::vector<double>&)>& reduce) {
  KpiValues out;
  double* fields[8] = {&out.ho_per_min,      &out.hof_per_min,
                       &out.pp_per_min,      &out.capacity_bps,
                       &out.rlf_per_min,     &out.reliability_pct,
                       &out.prep_per_min,    &out.resource_reservation_pct};
  for (int k = 0; k < 8; ++k) {
    std::vector<double> vals;
    vals.reserve(reps.size());
    for (const auto& r : reps) vals.push_back(r.by_index(k));
    *fields[k] = reduce(vals);
  }
  return out;
}

double mean_of(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = mean_of(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

}  // namespace

double t_quantile_975(int dof) {
  static const double table[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365,
                                 2.306,  2.262, 2.228, 2.201, 2.179, 2.160, 2.145,
                                 2.131,  2.120, 2.110, 2.101, 2.093, 2.086, 2.080,
                                 2.074,  2.069, 2.064, 2.060, 2.056, 2.052, 2.048,
                                 2.045,  2.042};
  if (dof < 1) return 0.0;
  if (dof <= 30) return table[dof - 1];
  return 1.96;
}

ScenarioRunData run_scenario_full(const ScenarioConfig& cfg, const RunOptions& options) {
  validate(cfg);

  bool any_ris = false;
  for (int c : cfg.simulation.configurations) any_ris |= flags_for_configuration(c).use_ris;
  std::optional<CodebookHandle> codebook;
  if (any_ris) codebook = obtain_codebook(cfg, options.codebook_cache_dir);

  const int n_reps = cfg.simulation.n_replicates;
  const auto& configurations = cfg.simulation.configurations;
  const int n_rows = static_cast<int>(configurations.size());

  bool keep = options.keep_replicate_logs || options.trace.channel ||
              options.trace.decisions || options.trace.events;
  ScenarioRunData data;
  data.logs.assign(n_rows, std::vector<ReplicateResult>(n_reps));

  struct Job {
    int row;
    int rep;
  };
  std::vector<Job> jobs;
  for (int row = 0; row < n_rows; ++row)
    for (int rep = 0; rep < n_reps; ++rep) jobs.push_back({row, rep});

  int n_threads = options.threads > 0
                      ? options.threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::max(1, std::min<int>(n_threads, static_cast<int>(jobs.size())));

  std::atomic<std::size_t> next{0};
  std::vector<std::string> errors(jobs.size());
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      const Job& job = jobs[i];
      bool first = job.row == 0 && job.rep == 0;
      try {
        data.logs[job.row][job.rep] = run_replicate(
            cfg, configurations[job.row], job.rep,
            codebook ? &codebook->codebook : nullptr, keep,
            options.trace.channel && first, options.trace.decisions && first);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& err : errors) {
    if (!err.empty()) throw std::runtime_error("replicate failed: " + err);
  }

  KpiReport report;
  report.config_hash = config_hash_hex(cfg);
  report.n_replicates = n_reps;
  for (int row = 0; row < n_rows; ++row) {
    ConfigurationResult res;
    res.configuration = configurations[row];
    res.label = configuration_label(res.configuration);
    for (int rep = 0; rep < n_reps; ++rep)
      res.replicates.push_back(data.logs[row][rep].kpis);
    double t = t_quantile_975(n_reps - 1);
    res.mean = kpi_map(res.replicates, [](std::vector<double>& v) { return mean_of(v); });
    res.ci_lo = kpi_map(res.replicates, [&](std::vector<double>& v) {
      return mean_of(v) - t * sd_of(v) / std::sqrt(static_cast<double>(v.size()));
    });
    res.ci_hi = kpi_map(res.replicates, [&](std::vector<double>& v) {
      return mean_of(v) + t * sd_of(v) / std::sqrt(static_cast<double>(v.size()));
    });
    report.rows.push_back(std::move(res));
  }
  data.report = std::move(report);
  if (!keep) data.logs.clear();
  return data;
}

KpiReport run_scenario(const ScenarioConfig& cfg, const RunOptions& options) {
  return run_scenario_full(cfg, options).report;
}

CodebookHandle obtain_codebook(const ScenarioConfig& cfg, const std::string& cache_dir) {
  CodebookHandle handle;
  std::uint64_t key = codebook_key(cfg);
  if (!cache_dir.empty()) {
    std::filesystem::create_directories(cache_dir);
    char name[64];
    std::snprintf(name, sizeof(name), "codebook_%016llx_%s.bin",
                  static_cast<unsigned long long>(key), to_string(cfg.ris.strategy));
    handle.path = (std::filesystem::path(cache_dir) / name).string();
    if (auto loaded = load_codebook(handle.path, key)) {
      handle.codebook = std::move(*loaded);
      handle.from_cache = true;
      return handle;
    }
  }
  PanelContext ctx(cfg.ris, cfg.channel);
  handle.codebook = build_codebook(ctx, cfg.ris);
  if (!handle.path.empty()) save_codebook(handle.path, handle.codebook, key);
  return handle;
}

std::string coverage_map_csv(const ScenarioConfig& cfg, const std::string& cache_dir) {
  CodebookHandle handle = obtain_codebook(cfg, cache_dir);
  PanelContext ctx(cfg.ris, cfg.channel);
  ZonePowerStats stats = zone_power_stats(ctx, handle.codebook);
  std::ostringstream out;
  out << "# config_hash=" << config_hash_hex(cfg) << "\n";
  out << "sub_zone,row,col,mean_gain_db,mean_power_dbm\n";
  double tx = cfg.channel.tx_power_dbm;
  for (int z = 0; z < 16; ++z) {
    double gain_db = lin_to_db(stats.sub_zone_mean_gain[z]);
    out << z << ',' << z / 4 << ',' << z % 4 << ',' << fmt_double(gain_db) << ','
        << fmt_double(tx + gain_db) << '\n';
  }
  return out.str();
}

std::string report_to_csv(const KpiReport& report) {
  std::ostringstream out;
  out << "configuration,kpi,mean,ci95_lo,ci95_hi,n_replicates,config_hash\n";
  for (const auto& row : report.rows) {
    for (int k = 0; k < 8; ++k) {
      out << row.configuration << ',' << kKpiNames[k] << ','
          << fmt_double(row.mean.by_index(k)) << ',' << fmt_double(row.ci_lo.by_index(k))
          << ',' << fmt_double(row.ci_hi.by_index(k)) << ',' << report.n_replicates
          << ',' << report.config_hash << '\n';
    }
  }
  return out.str();
}

namespace {
nlohmann::json kpi_to_json(const KpiValues& k) {
  nlohmann::json j;
  for (int i = 0; i < 8; ++i) j[kKpiNames[i]] = k.by_index(i);
  return j;
}

KpiValues kpi_from_json(const nlohmann::json& j) {
  KpiValues k;
  double* fields[8] = {&k.ho_per_min,  &k.hof_per_min,     &k.pp_per_min,
                       &k.capacity_bps, &k.rlf_per_min,     &k.reliability_pct,
                       &k.prep_per_min, &k.resource_reservation_pct};
  for (int i = 0; i < 8; ++i) *fields[i] = j.at(kKpiNames[i]).get<double>();
  return k;
}
}  // namespace

std::string report_to_json_text(const KpiReport& report) {
  nlohmann::json j;
  j["config_hash"] = report.config_hash;
  j["n_replicates"] = report.n_replicates;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    nlohmann::json r;
    r["configuration"] = row.configuration;
    r["label"] = row.label;
    r["mean"] = kpi_to_json(row.mean);
    r["ci95_lo"] = kpi_to_json(row.ci_lo);
    r["ci95_hi"] = kpi_to_json(row.ci_hi);
    nlohmann::json reps = nlohmann::json::array();
    for (const auto& rep : row.replicates) reps.push_back(kpi_to_json(rep));
    r["replicates"] = reps;
    rows.push_back(std::move(r));
  }
  j["results"] = std::move(rows);
  return j.dump(2);
}

KpiReport report_from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  KpiReport report;
  report.config_hash = j.at("config_hash").get<std::string>();
  report.n_replicates = j.at("n_replicates").get<int>();
  for (const auto& r : j.at("results")) {
    ConfigurationResult row;
    row.configuration = r.at("configuration").get<int>();
    row.label = r.at("label").get<std::string>();
    row.mean = kpi_from_json(r.at("mean"));
    row.ci_lo = kpi_from_json(r.at("ci95_lo"));
    row.ci_hi = kpi_from_json(r.at("ci95_hi"));
    for (const auto& rep : r.at("replicates")) row.replicates.push_back(kpi_from_json(rep));
    report.rows.push_back(std::move(row));
  }
  return report;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << content;
  if (!f) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace risho
