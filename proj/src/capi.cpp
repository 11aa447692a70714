#include "rishosim.h"

#include <cstring>
#include <exception>
#include <new>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "rishosim/config.hpp"
#include "rishosim/sim.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

risho_status fail(risho_status code, const std::string& msg) {
  set_error(msg);
  return code;
}

template <typename Fn>
risho_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    return fail(RISHO_ERR_INVALID_ARG, e.what());
  } catch (const std::runtime_error& e) {
    return fail(RISHO_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(RISHO_ERR_RUNTIME, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = new (std::nothrow) char[s.size() + 1];
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

struct risho_config {
  risho::ScenarioConfig cfg;
};

struct risho_report {
  risho::KpiReport report;
};

extern "C" {

const char* risho_version(void) { return "0.1.0"; }

const char* risho_last_error(void) { return g_last_error.c_str(); }

risho_status risho_config_create_default(risho_config** out) {
  if (!out) return fail(RISHO_ERR_INVALID_ARG, "out is NULL");
  *out = new (std::nothrow) risho_config{risho::default_config()};
  return *out ? RISHO_OK : fail(RISHO_ERR_RUNTIME, "allocation failed");
}

risho_status risho_config_load(const char* path, risho_config** out) {
  if (!path || !out) return fail(RISHO_ERR_INVALID_ARG, "path/out is NULL");
  return guarded([&]() -> risho_status {
    try {
      auto cfg = risho::config_from_file(path);
      *out = new risho_config{std::move(cfg)};
      return RISHO_OK;
    } catch (const std::invalid_argument& e) {
      return fail(RISHO_ERR_PARSE, e.what());
    }
  });
}

risho_status risho_config_parse(const char* json_text, risho_config** out) {
  if (!json_text || !out) return fail(RISHO_ERR_INVALID_ARG, "json/out is NULL");
  return guarded([&]() -> risho_status {
    try {
      auto cfg = risho::config_from_json_text(json_text);
      *out = new risho_config{std::move(cfg)};
      return RISHO_OK;
    } catch (const std::invalid_argument& e) {
      return fail(RISHO_ERR_PARSE, e.what());
    }
  });
}

void risho_config_free(risho_config* cfg) { delete cfg; }

risho_status risho_config_set(risho_config* cfg, const char* dotted_key,
                              const char* value_json) {
  if (!cfg || !dotted_key || !value_json)
    return fail(RISHO_ERR_INVALID_ARG, "NULL argument");
  return guarded([&]() -> risho_status {
    nlohmann::json j = nlohmann::json::parse(risho::config_to_json_text(cfg->cfg, 0));
    nlohmann::json value;
    try {
      value = nlohmann::json::parse(value_json);
    } catch (const std::exception& e) {
      return fail(RISHO_ERR_PARSE, std::string("value is not valid JSON: ") + e.what());
    }
    std::string key(dotted_key);
    nlohmann::json* node = &j;
    std::size_t pos = 0;
    while (true) {
      std::size_t dot = key.find('.', pos);
      std::string part = key.substr(pos, dot == std::string::npos ? dot : dot - pos);
      if (dot == std::string::npos) {
        (*node)[part] = value;
        break;
      }
      if (!node->contains(part))
        return fail(RISHO_ERR_INVALID_ARG, "unknown key: " + key);
      node = &(*node)[part];
      pos = dot + 1;
    }
    try {
      cfg->cfg = risho::config_from_json_text(j.dump());
      return RISHO_OK;
    } catch (const std::invalid_argument& e) {
      return fail(RISHO_ERR_PARSE, e.what());
    }
  });
}

risho_status risho_config_hash(const risho_config* cfg, char* buf, size_t buf_size) {
  if (!cfg || !buf) return fail(RISHO_ERR_INVALID_ARG, "NULL argument");
  std::string hex = risho::config_hash_hex(cfg->cfg);
  if (buf_size < hex.size() + 1)
    return fail(RISHO_ERR_INVALID_ARG, "buffer too small (need 17 bytes)");
  std::memcpy(buf, hex.c_str(), hex.size() + 1);
  return RISHO_OK;
}

risho_status risho_config_dump(const risho_config* cfg, char** out_json) {
  if (!cfg || !out_json) return fail(RISHO_ERR_INVALID_ARG, "NULL argument");
  *out_json = dup_string(risho::config_to_json_text(cfg->cfg, 2));
  return *out_json ? RISHO_OK : fail(RISHO_ERR_RUNTIME, "allocation failed");
}

void risho_string_free(char* s) { delete[] s; }

risho_status risho_run(const risho_config* cfg, const risho_run_options* options,
                       risho_report** out) {
  if (!cfg || !out) return fail(RISHO_ERR_INVALID_ARG, "cfg/out is NULL");
  return guarded([&]() -> risho_status {
    risho::RunOptions opts;
    std::string events_path, channel_path, decision_path;
    if (options) {
      if (options->codebook_cache_dir) opts.codebook_cache_dir = options->codebook_cache_dir;
      opts.threads = options->threads;
      if (options->events_path) {
        events_path = options->events_path;
        opts.trace.events = true;
      }
      if (options->channel_trace_path) {
        channel_path = options->channel_trace_path;
        opts.trace.channel = true;
      }
      if (options->decision_trace_path) {
        decision_path = options->decision_trace_path;
        opts.trace.decisions = true;
      }
    }
    risho::ScenarioRunData data = risho::run_scenario_full(cfg->cfg, opts);

    if (!events_path.empty()) {
      std::ostringstream log;
      for (std::size_t row = 0; row < data.logs.size(); ++row) {
        for (std::size_t rep = 0; rep < data.logs[row].size(); ++rep) {
          nlohmann::json meta;
          meta["type"] = "meta";
          meta["configuration"] = cfg->cfg.simulation.configurations[row];
          meta["replicate"] = rep;
          meta["config_hash"] = data.report.config_hash;
          log << meta.dump() << '\n';
          log << risho::events_to_ndjson(data.logs[row][rep].events);
        }
      }
      risho::write_text_file(events_path, log.str());
    }
    if (!channel_path.empty()) {
      std::string body = "# config_hash=" + data.report.config_hash + "\n";
      body += "tick,ue,sector,rsrp_dbm,sinr_db\n";
      if (!data.logs.empty() && !data.logs[0].empty())
        body += data.logs[0][0].channel_trace;
      risho::write_text_file(channel_path, body);
    }
    if (!decision_path.empty()) {
      std::string body;
      if (!data.logs.empty() && !data.logs[0].empty())
        body = data.logs[0][0].decision_trace;
      risho::write_text_file(decision_path, body);
    }

    *out = new risho_report{std::move(data.report)};
    return RISHO_OK;
  });
}

void risho_report_free(risho_report* report) { delete report; }

risho_status risho_report_export_csv(const risho_report* report, const char* path) {
  if (!report || !path) return fail(RISHO_ERR_INVALID_ARG, "NULL argument");
  return guarded([&]() -> risho_status {
    risho::write_text_file(path, risho::report_to_csv(report->report));
    return RISHO_OK;
  });
}

risho_status risho_report_export_json(const risho_report* report, const char* path) {
  if (!report || !path) return fail(RISHO_ERR_INVALID_ARG, "NULL argument");
  return guarded([&]() -> risho_status {
    risho::write_text_file(path, risho::report_to_json_text(report->report));
    return RISHO_OK;
  });
}

risho_status risho_report_to_json(const risho_report* report, char** out_json) {
  if (!report || !out_json) return fail(RISHO_ERR_INVALID_ARG, "NULL argument");
  *out_json = dup_string(risho::report_to_json_text(report->report));
  return *out_json ? RISHO_OK : fail(RISHO_ERR_RUNTIME, "allocation failed");
}

risho_status risho_report_kpi(const risho_report* report, int configuration,
                              const char* kpi_name, double* mean, double* ci_lo,
                              double* ci_hi) {
  if (!report || !kpi_name) return fail(RISHO_ERR_INVALID_ARG, "NULL argument");
  int kpi = -1;
  for (int i = 0; i < 8; ++i) {
    if (std::strcmp(kpi_name, risho::kKpiNames[i]) == 0) kpi = i;
  }
  if (kpi < 0) return fail(RISHO_ERR_INVALID_ARG, std::string("unknown KPI: ") + kpi_name);
  for (const auto& row : report->report.rows) {
    if (row.configuration == configuration) {
      if (mean) *mean = row.mean.by_index(kpi);
      if (ci_lo) *ci_lo = row.ci_lo.by_index(kpi);
      if (ci_hi) *ci_hi = row.ci_hi.by_index(kpi);
      return RISHO_OK;
    }
  }
  return fail(RISHO_ERR_INVALID_ARG, "configuration not present in the report");
}

risho_status risho_codebook_build(const risho_config* cfg, const char* cache_dir,
                                  int* was_cached) {
  if (!cfg || !cache_dir) return fail(RISHO_ERR_INVALID_ARG, "cfg/cache_dir is NULL");
  return guarded([&]() -> risho_status {
    risho::CodebookHandle handle = risho::obtain_codebook(cfg->cfg, cache_dir);
    if (was_cached) *was_cached = handle.from_cache ? 1 : 0;
    return RISHO_OK;
  });
}

risho_status risho_coverage_map_csv(const risho_config* cfg, const char* cache_dir,
                                    const char* out_path) {
  if (!cfg || !out_path) return fail(RISHO_ERR_INVALID_ARG, "cfg/out_path is NULL");
  return guarded([&]() -> risho_status {
    std::string csv = risho::coverage_map_csv(cfg->cfg, cache_dir ? cache_dir : "");
    risho::write_text_file(out_path, csv);
    return RISHO_OK;
  });
}

}  // extern "C"
