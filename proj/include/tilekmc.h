/*
 * tilekmc C API: kinetic Monte Carlo tile self-assembly simulation and
 * compression-based analysis behind a stable extern "C" surface.
 *
 * All functions return a tkmc_status; non-zero means failure and
 * tkmc_last_error() carries a thread-local message. Objects are opaque
 * handles released with their matching _free function.
 */
#ifndef TILEKMC_H
#define TILEKMC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tkmc_status {
    TKMC_OK = 0,
    TKMC_EBADCONFIG = 1, /* malformed or rejected configuration */
    TKMC_EIO = 2,        /* file system failure */
    TKMC_EINVAL = 3,     /* invalid argument or domain error */
    TKMC_ERUNTIME = 4,   /* any other runtime failure */
} tkmc_status;

const char* tkmc_version(void);

/* Thread-local message for the most recent failure on this thread. */
const char* tkmc_last_error(void);

/* ------------------------------------------------------------------ */
/* Configuration                                                      */

typedef struct tkmc_config tkmc_config;

tkmc_status tkmc_config_load(const char* path, tkmc_config** out);
tkmc_status tkmc_config_parse(const char* json_text, tkmc_config** out);
void tkmc_config_free(tkmc_config* config);

/* Resolved configuration as a JSON string; free with tkmc_string_free. */
tkmc_status tkmc_config_to_json(const tkmc_config* config, char** out);
void tkmc_string_free(char* s);

/* Number of (parameter point, seed) runs the configuration expands to. */
tkmc_status tkmc_config_run_count(const tkmc_config* config, size_t* out);

/* First entry of the configured seed list. */
tkmc_status tkmc_config_first_seed(const tkmc_config* config, uint64_t* out);

/* ------------------------------------------------------------------ */
/* Simulation                                                         */

typedef struct tkmc_result tkmc_result;

/*
 * Runs the single parameter point described by the configuration (every
 * energy range must hold exactly one value) with the given seed, writes
 * <run_id>.png and <run_id>.raw plus a one-line record into
 * out_dir/manifest.jsonl, and returns the run record. events_path, when
 * non-NULL, receives a tab-separated event log (step, kind, row, col,
 * activation).
 */
tkmc_status tkmc_simulate(const tkmc_config* config, uint64_t seed, const char* out_dir,
                          const char* events_path, tkmc_result** out);
void tkmc_result_free(tkmc_result* result);

const char* tkmc_result_run_id(const tkmc_result* result);
/* Full record as JSON; free with tkmc_string_free. */
tkmc_status tkmc_result_to_json(const tkmc_result* result, char** out);
double tkmc_result_ratio(const tkmc_result* result);
int64_t tkmc_result_c_bits(const tkmc_result* result);
int tkmc_result_aggregates(const tkmc_result* result);
double tkmc_result_hetero_bond_fraction(const tkmc_result* result);

/*
 * Expands the full grid and simulates every point over `jobs` worker
 * threads. With resume != 0, runs already recorded in
 * out_dir/manifest.jsonl are skipped. On success *executed and *skipped
 * (either may be NULL) receive the fresh and reused run counts.
 */
tkmc_status tkmc_sweep(const tkmc_config* config, const char* out_dir, int jobs, int resume,
                       size_t* executed, size_t* skipped);

/* ------------------------------------------------------------------ */
/* Analysis over a manifest                                           */

/* Parses every record; fails on a missing or malformed manifest. On
 * success *records (may be NULL) receives the record count. */
tkmc_status tkmc_manifest_check(const char* manifest_path, size_t* records);

/*
 * mode: "ratio" | "ncd" | "correlation" | "transition" | "ortho".
 * varied names the swept parameter for mode "ortho" ("E_s", "E_11",
 * "E_22", "E_12") and is ignored otherwise (may be NULL).
 * Writes mode-specific delimited reports into out_dir.
 */
tkmc_status tkmc_analyze(const char* manifest_path, const char* mode, const char* varied,
                         const char* out_dir);

/* metric: "ratio" | "ncd". Writes assignments.tsv, dendrogram.newick
 * and representatives.jsonl into out_dir. */
tkmc_status tkmc_cluster(const char* manifest_path, const char* metric, int k, uint64_t seed,
                         const char* out_dir);

/* sort_key: "ratio" | "dist" | "C". Writes gallery.png and
 * gallery_index.tsv into out_dir. */
tkmc_status tkmc_report(const char* manifest_path, const char* sort_key, int columns,
                        const char* out_dir);

/* ------------------------------------------------------------------ */
/* Compression primitives                                             */

/* Bits in the fixed-settings DEFLATE stream of the input. */
tkmc_status tkmc_compress_len(const uint8_t* data, size_t len, int64_t* bits);

/* Normalized compression distance between two byte strings. */
tkmc_status tkmc_ncd(const uint8_t* a, size_t a_len, const uint8_t* b, size_t b_len,
                     double* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* TILEKMC_H */
