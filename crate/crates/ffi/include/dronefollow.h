/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef DRONEFOLLOW_H
#define DRONEFOLLOW_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DfStatus {
  DF_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  DF_STATUS_NULL = 1,
  DF_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Scenario or tracker configuration failed to parse or validate.
   */
  DF_STATUS_CONFIG = 3,
  DF_STATUS_IO = 4,
  DF_STATUS_PANIC = 5,
} DfStatus;

/**
 * Completed run with its metrics and summary.
 */
typedef struct DfRun DfRun;

/**
 * Loaded, validated scenario.
 */
typedef struct DfScenario DfScenario;

/**
 * Color tracker with its PID states.
 */
typedef struct DfTracker DfTracker;

typedef struct DfCircle {
  double x;
  double y;
  double radius;
} DfCircle;

/**
 * Tracker output for one frame. Command fields are in ±100 units.
 * `circle` is meaningful only when `locked` is true.
 */
typedef struct DfTrackResult {
  double forward;
  double lateral;
  double vertical;
  double yaw_rate;
  bool locked;
  struct DfCircle circle;
} DfTrackResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null.
 *
 * The pointer stays valid until the next call into this library on the
 * same thread. Do not free it.
 */
const char *df_last_error_message(void);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a pointer obtained from this library, freed once.
 */
void df_string_free(char *s);

/**
 * Default scenario.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum DfStatus df_scenario_default(struct DfScenario **out);

/**
 * Parse and validate a scenario from JSON text.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum DfStatus df_scenario_from_json(const char *json, struct DfScenario **out);

/**
 * Load and validate a scenario from a JSON file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum DfStatus df_scenario_from_file(const char *path, struct DfScenario **out);

/**
 * Replace the scenario seed.
 *
 * # Safety
 * `scenario` must be a live handle.
 */
enum DfStatus df_scenario_set_seed(struct DfScenario *scenario, uint64_t seed);

/**
 * Fully resolved scenario as JSON. Free with [`df_string_free`].
 *
 * # Safety
 * `scenario` must be a live handle; `out` must be valid for writes.
 */
enum DfStatus df_scenario_to_json(const struct DfScenario *scenario, char **out);

/**
 * # Safety
 * `scenario` must be null or a live handle, freed once.
 */
void df_scenario_free(struct DfScenario *scenario);

/**
 * Run a scenario to completion.
 *
 * # Safety
 * `scenario` must be a live handle; `out` must be valid for writes.
 */
enum DfStatus df_run(const struct DfScenario *scenario, struct DfRun **out);

/**
 * Run summary as JSON. Free with [`df_string_free`].
 *
 * # Safety
 * `run` must be a live handle; `out` must be valid for writes.
 */
enum DfStatus df_run_summary_json(const struct DfRun *run, char **out);

/**
 * Per-tick metrics as CSV with header. Free with [`df_string_free`].
 *
 * # Safety
 * `run` must be a live handle; `out` must be valid for writes.
 */
enum DfStatus df_run_metrics_csv(const struct DfRun *run, char **out);

/**
 * Write `metrics.csv` and `summary.json` under `dir`, creating it if needed.
 *
 * # Safety
 * `run` must be a live handle; `dir` must be a NUL-terminated string.
 */
enum DfStatus df_run_write_outputs(const struct DfRun *run, const char *dir);

/**
 * # Safety
 * `run` must be null or a live handle, freed once.
 */
void df_run_free(struct DfRun *run);

/**
 * New tracker. `config_json` may be null for the default configuration;
 * otherwise missing keys take their defaults.
 *
 * # Safety
 * `config_json` must be null or NUL-terminated; `out` must be valid for writes.
 */
enum DfStatus df_tracker_new(const char *config_json, struct DfTracker **out);

/**
 * Track one packed RGB frame (`width * height * 3` bytes, row-major).
 *
 * # Safety
 * `tracker` must be a live handle; `rgb` must point to `width * height * 3`
 * readable bytes; `out` must be valid for writes.
 */
enum DfStatus df_tracker_track(struct DfTracker *tracker,
                               const uint8_t *rgb,
                               size_t width,
                               size_t height,
                               double dt,
                               double altitude,
                               struct DfTrackResult *out);

/**
 * Reset the tracker's PID states.
 *
 * # Safety
 * `tracker` must be a live handle.
 */
enum DfStatus df_tracker_reset(struct DfTracker *tracker);

/**
 * # Safety
 * `tracker` must be null or a live handle, freed once.
 */
void df_tracker_free(struct DfTracker *tracker);

/**
 * Smallest circle enclosing `n` points given as interleaved `x, y` pairs.
 *
 * # Safety
 * `xy` must point to `2 * n` readable doubles; `out` must be valid for writes.
 */
enum DfStatus df_min_enclosing_circle(const double *xy, size_t n, struct DfCircle *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DRONEFOLLOW_H */
