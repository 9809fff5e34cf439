/* yardsim C API: opaque handles over the simulator core.
 *
 * Every function that can fail returns a ys_status; YS_OK is 0. Functions
 * taking (err, errcap) write a NUL-terminated message on failure when
 * errcap > 0. Handles are created by ys_*_create/parse functions and must
 * be released with the matching ys_*_free.
 */
#ifndef YARDSIM_H
#define YARDSIM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ys_status {
    YS_OK = 0,
    YS_EINVAL = 1,   /* invalid argument / config */
    YS_EPARSE = 2,   /* layout, scenario or config text rejected */
    YS_EIO = 3,      /* file system failure */
    YS_EINTERNAL = 4 /* unexpected internal error */
} ys_status;

typedef enum ys_controller {
    YS_CONTROLLER_ORCHESTRATED = 0,
    YS_CONTROLLER_ISOLATED = 1
} ys_controller;

typedef enum ys_station {
    YS_STATION_CHARGING = 0,
    YS_STATION_INSPECTION = 1,
    YS_STATION_CLEANING = 2,
    YS_STATION_LOADING = 3,
    YS_STATION_PARKING = 4
} ys_station;

typedef enum ys_run_status {
    YS_RUN_COMPLETED = 0,
    YS_RUN_FACILITY_FAILURE = 1,
    YS_RUN_TIME_CAP = 2
} ys_run_status;

typedef struct ys_layout ys_layout;
typedef struct ys_outcome ys_outcome;

const char* ys_version(void);
const char* ys_status_name(ys_status status);

/* ---- layouts ------------------------------------------------------- */

/* name: "small" | "medium" | "large". */
ys_status ys_layout_builtin(const char* name, ys_layout** out);
ys_status ys_layout_parse(const char* text, ys_layout** out, char* err,
                          size_t errcap);
ys_status ys_layout_load_file(const char* path, ys_layout** out, char* err,
                              size_t errcap);
void ys_layout_free(ys_layout* layout);

int ys_layout_width(const ys_layout* layout);
int ys_layout_height(const ys_layout* layout);
int ys_layout_berths(const ys_layout* layout, ys_station station);

/* Returns the number of violations (0 = valid). When report/reportcap are
 * given, writes a newline-separated report (possibly truncated). */
int ys_layout_validate(const ys_layout* layout, char* report,
                       size_t reportcap);

/* Caller frees with ys_string_free. */
ys_status ys_layout_serialize(const ys_layout* layout, char** out);

void ys_string_free(char* s);

/* ---- single runs ---------------------------------------------------- */

typedef struct ys_run_params {
    int controller;          /* ys_controller */
    double demand;           /* expected vehicles over the window */
    double window_seconds;   /* default 18000 when 0 */
    uint64_t seed;
    double inspection_fail_rate; /* default 0.005 when < 0 */
    double max_sim_time_seconds; /* default 86400 when 0 */
    const char* events_path;     /* optional: write event log lines here */
} ys_run_params;

void ys_run_params_init(ys_run_params* params);

ys_status ys_run(const ys_layout* layout, const ys_run_params* params,
                 ys_outcome** out, char* err, size_t errcap);
void ys_outcome_free(ys_outcome* outcome);

int ys_outcome_status(const ys_outcome* outcome); /* ys_run_status */
int ys_outcome_arrivals(const ys_outcome* outcome);
int ys_outcome_exits(const ys_outcome* outcome);
int ys_outcome_exits_in_window(const ys_outcome* outcome);
double ys_outcome_last_exit_seconds(const ys_outcome* outcome); /* -1 if none */
double ys_outcome_failure_seconds(const ys_outcome* outcome);   /* -1 if none */
double ys_outcome_throughput(const ys_outcome* outcome); /* veh/h, 0 if no exits */

/* ---- experiment matrix ---------------------------------------------- */

/* Runs the full matrix and writes runs.csv + summary.csv under out_dir.
 * config_json: optional JSON overrides (NULL or "" = defaults); unknown
 * keys are rejected. reps/seed/workers <= 0 keep the config (or default)
 * values; reps/workers > 0 and seed != 0 override. */
ys_status ys_matrix_run(const char* config_json, const char* out_dir,
                        int reps, uint64_t seed, int workers, char* err,
                        size_t errcap);

/* ---- brute-force oracles -------------------------------------------- */

/* Runs the scenario file and returns the report text (caller frees with
 * ys_string_free). */
ys_status ys_oracle_run(const char* scenario_path, char** report, char* err,
                        size_t errcap);

#ifdef __cplusplus
}
#endif

#endif /* YARDSIM_H */
