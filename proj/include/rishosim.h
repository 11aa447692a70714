/*
 * rishosim — RIS-assisted LTM handover simulator.
 *
 * C interface to the simulator core: opaque handles, integer status codes,
 * thread-local error messages. All functions return RISHO_OK on success.
 */

#ifndef RISHOSIM_H
#define RISHOSIM_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum risho_status {
  RISHO_OK = 0,
  RISHO_ERR_INVALID_ARG = 1,
  RISHO_ERR_PARSE = 2,
  RISHO_ERR_IO = 3,
  RISHO_ERR_RUNTIME = 4
} risho_status;

typedef struct risho_config risho_config;
typedef struct risho_report risho_report;

const char* risho_version(void);

/* Message describing the most recent failure on this thread. */
const char* risho_last_error(void);

/* ---- configuration ---------------------------------------------------- */

risho_status risho_config_create_default(risho_config** out);
risho_status risho_config_load(const char* path, risho_config** out);
risho_status risho_config_parse(const char* json_text, risho_config** out);
void risho_config_free(risho_config* cfg);

/* Override one field by dotted key, value given as JSON
 * (e.g. "simulation.n_ues", "25"). */
risho_status risho_config_set(risho_config* cfg, const char* dotted_key,
                              const char* value_json);
risho_status risho_config_hash(const risho_config* cfg, char* buf, size_t buf_size);

/* Canonical JSON dump; free with risho_string_free. */
risho_status risho_config_dump(const risho_config* cfg, char** out_json);
void risho_string_free(char* s);

/* ---- scenario runs ---------------------------------------------------- */

typedef struct risho_run_options {
  const char* codebook_cache_dir; /* NULL: build codebooks in memory */
  int threads;                    /* 0: hardware concurrency */
  const char* events_path;        /* NULL or NDJSON event log destination */
  const char* channel_trace_path; /* NULL or per-tick channel CSV */
  const char* decision_trace_path;/* NULL or decision NDJSON */
} risho_run_options;

risho_status risho_run(const risho_config* cfg, const risho_run_options* options,
                       risho_report** out);
void risho_report_free(risho_report* report);

risho_status risho_report_export_csv(const risho_report* report, const char* path);
risho_status risho_report_export_json(const risho_report* report, const char* path);
risho_status risho_report_to_json(const risho_report* report, char** out_json);

/* Aggregate of one KPI for one configuration (1..8). KPI names:
 * ho_per_min, hof_per_min, pp_per_min, capacity_bps, rlf_per_min,
 * reliability_pct, prep_per_min, resource_reservation_pct. */
risho_status risho_report_kpi(const risho_report* report, int configuration,
                              const char* kpi_name, double* mean, double* ci_lo,
                              double* ci_hi);

/* ---- RIS codebooks ---------------------------------------------------- */

/* Build (or load) the codebook for the configured sweeping strategy.
 * was_cached is set to 1 when the cache already held it. */
risho_status risho_codebook_build(const risho_config* cfg, const char* cache_dir,
                                  int* was_cached);

/* Per-sub-zone mean received power over the 40x40 m zone grid, CSV. */
risho_status risho_coverage_map_csv(const risho_config* cfg, const char* cache_dir,
                                    const char* out_path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* RISHOSIM_H */
