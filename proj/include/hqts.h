/* Hybrid tabu-search CVRP solver: C interface.
 *
 * Objects are opaque handles created and released by this library. Calls
 * return hqts_status; on any failure hqts_last_error() holds a message for
 * the calling thread until its next library call. Strings returned through
 * char** outputs are heap-allocated and must be released with
 * hqts_string_free().
 */
#ifndef HQTS_H
#define HQTS_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hqts_status {
    HQTS_OK = 0,
    HQTS_ERROR_INVALID_ARGUMENT = 1,
    HQTS_ERROR_PARSE = 2,
    HQTS_ERROR_VALIDATION = 3,
    HQTS_ERROR_RUNTIME = 4
} hqts_status;

typedef struct hqts_instance hqts_instance;
typedef struct hqts_params hqts_params;
typedef struct hqts_result hqts_result;

const char* hqts_version(void);

/* Message for the most recent failure on this thread; never NULL. */
const char* hqts_last_error(void);

void hqts_string_free(char* s);

/* ---- instances ---- */

hqts_status hqts_instance_load(const char* path, hqts_instance** out);
hqts_status hqts_instance_parse(const char* text, hqts_instance** out);
void hqts_instance_free(hqts_instance* inst);

const char* hqts_instance_name(const hqts_instance* inst);
int hqts_instance_num_locations(const hqts_instance* inst);
int hqts_instance_num_customers(const hqts_instance* inst);
double hqts_instance_capacity(const hqts_instance* inst);
int hqts_instance_fleet_size(const hqts_instance* inst);
int hqts_instance_has_coords(const hqts_instance* inst);
/* 1 when a best-known result is attached (registry or file metadata). */
int hqts_instance_has_best_known(const hqts_instance* inst);
double hqts_instance_best_known_distance(const hqts_instance* inst);
int hqts_instance_best_known_vehicles(const hqts_instance* inst);
/* Travel cost between internal location ids (0 = depot). */
double hqts_instance_cost(const hqts_instance* inst, int i, int j);
/* Round-trips the instance back to its text form. */
hqts_status hqts_instance_to_text(const hqts_instance* inst, char** out);

/* ---- solver parameters ----
 * Keys (values are strings): variant (ts|ts_so|cw), sampler (sa|remote|brute),
 * seed, fleet, tenure, time_limit, non_improve_stop, resequence_trigger,
 * x_low, x_high, reps, num_reads, sweeps, beta_initial, beta_final,
 * penalty_a, penalty_b, remote_endpoint, remote_timeout, out_dir.
 * Unknown keys or unparsable values are rejected.
 */

hqts_params* hqts_params_create(void);
void hqts_params_free(hqts_params* params);
hqts_status hqts_params_set(hqts_params* params, const char* key, const char* value);
/* Reads a flat key=value file ('#' starts a comment). Existing keys are
 * overwritten; set keys after loading to override the file. */
hqts_status hqts_params_load_file(hqts_params* params, const char* path);
/* NULL when the key is unset; otherwise the stored value (do not free). */
const char* hqts_params_get(const hqts_params* params, const char* key);

/* ---- solving ---- */

/* Runs the variant selected by the params (default ts_so). */
hqts_status hqts_solve(const hqts_instance* inst, const hqts_params* params,
                       hqts_result** out);
/* Savings construction, independent of params. */
hqts_status hqts_clarke_wright(const hqts_instance* inst, hqts_result** out);

void hqts_result_free(hqts_result* result);
double hqts_result_cost(const hqts_result* result);
int hqts_result_feasible(const hqts_result* result);
int hqts_result_vehicles_used(const hqts_result* result);
int hqts_result_num_routes(const hqts_result* result);
int hqts_result_route_size(const hqts_result* result, int route);
/* Copies the route's stops (instance-file ids) into buffer; returns the
 * stop count, or -1 when the buffer is too small. */
int hqts_result_route_stops(const hqts_result* result, int route, int* buffer, int buffer_len);
uint64_t hqts_result_seed(const hqts_result* result);
const char* hqts_result_stop_reason(const hqts_result* result);
double hqts_result_wallclock_seconds(const hqts_result* result);
long hqts_result_iterations(const hqts_result* result);
long hqts_result_cache_hits(const hqts_result* result);
long hqts_result_cache_misses(const hqts_result* result);
long hqts_result_sampler_calls(const hqts_result* result);

hqts_status hqts_result_to_json(const hqts_result* result, char** out);
hqts_status hqts_result_stats_csv(const hqts_result* result, char** out);
hqts_status hqts_result_render_svg(const hqts_result* result, char** out);

/* ---- solution files ---- */

/* Parses a solution JSON against the instance, re-validating cost and
 * coverage, and reports the recomputed cost/feasibility. */
hqts_status hqts_solution_json_validate(const hqts_instance* inst, const char* json,
                                        double* cost_out, int* feasible_out);
/* Renders a solution JSON to SVG. */
hqts_status hqts_solution_json_render_svg(const hqts_instance* inst, const char* json,
                                          char** out);

/* ---- benchmarking ---- */

/* Runs instances x repetitions using the params (variant, reps, seed,
 * out_dir, ...). When out_dir is set, per-run artifacts plus report.csv,
 * report_meta.csv and deviation_summary.csv are written there. The report
 * CSV is returned through report_csv_out when non-NULL. */
hqts_status hqts_benchmark(const char* const* instance_paths, int num_paths,
                           const hqts_params* params, char** report_csv_out);

#ifdef __cplusplus
}
#endif

#endif /* HQTS_H */
