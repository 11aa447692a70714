// Command line front-end for the rishosim shared library. Talks to the
// simulator exclusively through the C API in rishosim.h.

#include <cstdio>
#include <cstdlib>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rishosim.h"

namespace {

struct ConfigDeleter {
  void operator()(risho_config* c) const { risho_config_free(c); }
};
struct ReportDeleter {
  void operator()(risho_report* r) const { risho_report_free(r); }
};
using ConfigPtr = std::unique_ptr<risho_config, ConfigDeleter>;
using ReportPtr = std::unique_ptr<risho_report, ReportDeleter>;

[[noreturn]] void die(const std::string& context) {
  std::fprintf(stderr, "error: %s: %s\n", context.c_str(), risho_last_error());
  std::exit(1);
}

ConfigPtr load_config(const std::string& scenario_path) {
  risho_config* raw = nullptr;
  if (scenario_path.empty()) {
    if (risho_config_create_default(&raw) != RISHO_OK) die("default config");
  } else {
    if (risho_config_load(scenario_path.c_str(), &raw) != RISHO_OK)
      die("loading " + scenario_path);
  }
  return ConfigPtr(raw);
}

void apply_override(risho_config* cfg, const std::string& key, const std::string& value) {
  if (risho_config_set(cfg, key.c_str(), value.c_str()) != RISHO_OK)
    die("setting " + key);
}

std::string configs_to_json(const std::string& spec) {
  if (spec == "all") return "[1,2,3,4,5,6,7,8]";
  std::ostringstream out;
  out << '[';
  std::stringstream in(spec);
  std::string part;
  bool first = true;
  while (std::getline(in, part, ',')) {
    if (!first) out << ',';
    out << part;
    first = false;
  }
  out << ']';
  return out.str();
}

void print_report_summary(const risho_report* report, const std::string& configs) {
  static const char* kpis[] = {"ho_per_min",  "hof_per_min",     "pp_per_min",
                               "capacity_bps", "rlf_per_min",     "reliability_pct",
                               "prep_per_min", "resource_reservation_pct"};
  std::stringstream in(configs == "all" ? "1,2,3,4,5,6,7,8" : configs);
  std::string part;
  std::printf("%-4s", "cfg");
  for (const char* k : kpis) std::printf(" %22s", k);
  std::printf("\n");
  while (std::getline(in, part, ',')) {
    int c = std::atoi(part.c_str());
    std::printf("%-4d", c);
    for (const char* k : kpis) {
      double mean = 0, lo = 0, hi = 0;
      if (risho_report_kpi(report, c, k, &mean, &lo, &hi) == RISHO_OK)
        std::printf(" %22.6g", mean);
      else
        std::printf(" %22s", "-");
    }
    std::printf("\n");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RIS-assisted LTM handover simulator"};
  app.require_subcommand(1);

  std::string scenario, out_csv, out_json, cache_dir, configs = "all";
  std::string events_path, channel_path, decisions_path, strategy;
  std::vector<std::string> overrides;
  long long seed = -1;
  double duration = -1;
  int ues = -1, replicates = -1, threads = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", scenario, "Scenario JSON file (defaults built in)");
    cmd->add_option("--set", overrides,
                    "Override a config field: dotted.key=json (repeatable)");
  };

  CLI::App* run = app.add_subcommand("run", "Simulate the configured scenarios");
  add_common(run);
  run->add_option("--seed", seed, "Master seed override");
  run->add_option("--duration", duration, "Duration override, seconds");
  run->add_option("--ues", ues, "Number of UEs override");
  run->add_option("--replicates", replicates, "Number of replicates override");
  run->add_option("--configs", configs, "Configurations to run, e.g. 1,3,8 or all");
  run->add_option("--out", out_csv, "Report CSV destination");
  run->add_option("--json", out_json, "Report JSON destination");
  run->add_option("--cache", cache_dir, "RIS codebook cache directory");
  run->add_option("--threads", threads, "Worker threads (0 = hardware)");

  CLI::App* codebook = app.add_subcommand("codebook", "Precompute / cache RIS codebooks");
  add_common(codebook);
  codebook->add_option("--strategy", strategy, "sequential | simultaneous");
  codebook->add_option("--cache", cache_dir, "Cache directory")->required();

  CLI::App* coverage = app.add_subcommand("coverage-map",
                                          "Per-sub-zone received power map (CSV)");
  add_common(coverage);
  coverage->add_option("--strategy", strategy, "sequential | simultaneous");
  coverage->add_option("--out", out_csv, "Output CSV path")->required();
  coverage->add_option("--cache", cache_dir, "Codebook cache directory");

  CLI::App* trace = app.add_subcommand("trace", "Run with channel/decision dumps");
  add_common(trace);
  trace->add_option("--seed", seed, "Master seed override");
  trace->add_option("--duration", duration, "Duration override, seconds");
  trace->add_option("--ues", ues, "Number of UEs override");
  trace->add_option("--replicates", replicates, "Number of replicates override");
  trace->add_option("--configs", configs, "Configurations to run");
  trace->add_option("--events", events_path, "Event log NDJSON destination");
  trace->add_option("--channel", channel_path, "Channel trace CSV destination");
  trace->add_option("--decisions", decisions_path, "Decision trace NDJSON destination");
  trace->add_option("--out", out_csv, "Report CSV destination");
  trace->add_option("--cache", cache_dir, "RIS codebook cache directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  ConfigPtr cfg = load_config(scenario);
  for (const auto& kv : overrides) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "error: --set expects dotted.key=json, got '%s'\n", kv.c_str());
      return 2;
    }
    apply_override(cfg.get(), kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (seed >= 0) apply_override(cfg.get(), "simulation.master_seed", std::to_string(seed));
  if (duration > 0)
    apply_override(cfg.get(), "simulation.duration_s", std::to_string(duration));
  if (ues > 0) apply_override(cfg.get(), "simulation.n_ues", std::to_string(ues));
  if (replicates > 0)
    apply_override(cfg.get(), "simulation.n_replicates", std::to_string(replicates));
  if (!strategy.empty())
    apply_override(cfg.get(), "ris.strategy", "\"" + strategy + "\"");

  char hash[17] = {0};
  risho_config_hash(cfg.get(), hash, sizeof(hash));

  if (run->parsed() || trace->parsed()) {
    apply_override(cfg.get(), "simulation.configurations", configs_to_json(configs));
    risho_run_options opts{};
    opts.codebook_cache_dir = cache_dir.empty() ? nullptr : cache_dir.c_str();
    opts.threads = threads;
    opts.events_path = events_path.empty() ? nullptr : events_path.c_str();
    opts.channel_trace_path = channel_path.empty() ? nullptr : channel_path.c_str();
    opts.decision_trace_path = decisions_path.empty() ? nullptr : decisions_path.c_str();

    risho_report* raw = nullptr;
    if (risho_run(cfg.get(), &opts, &raw) != RISHO_OK) die("run");
    ReportPtr report(raw);

    if (!out_csv.empty() &&
        risho_report_export_csv(report.get(), out_csv.c_str()) != RISHO_OK)
      die("writing " + out_csv);
    if (!out_json.empty() &&
        risho_report_export_json(report.get(), out_json.c_str()) != RISHO_OK)
      die("writing " + out_json);

    std::printf("config_hash=%s\n", hash);
    print_report_summary(report.get(), configs);
    if (!out_csv.empty()) std::printf("report: %s\n", out_csv.c_str());
    return 0;
  }

  if (codebook->parsed()) {
    int was_cached = 0;
    if (risho_codebook_build(cfg.get(), cache_dir.c_str(), &was_cached) != RISHO_OK)
      die("codebook");
    std::printf("codebook %s (config_hash=%s, cache=%s)\n",
                was_cached ? "loaded from cache" : "built", hash, cache_dir.c_str());
    return 0;
  }

  if (coverage->parsed()) {
    if (risho_coverage_map_csv(cfg.get(), cache_dir.empty() ? nullptr : cache_dir.c_str(),
                               out_csv.c_str()) != RISHO_OK)
      die("coverage-map");
    std::printf("coverage map written to %s\n", out_csv.c_str());
    return 0;
  }

  return 2;
}
