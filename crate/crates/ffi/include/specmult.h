#ifndef SPECMULT_H
#define SPECMULT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum {
  SPECMULT_STATUS_OK = 0,
  SPECMULT_STATUS_NULL_POINTER = 1,
  SPECMULT_STATUS_INVALID_UTF8 = 2,
  SPECMULT_STATUS_PARAMETER = 3,
  SPECMULT_STATUS_DOMAIN = 4,
  SPECMULT_STATUS_ATL = 5,
  SPECMULT_STATUS_SHAPE = 6,
  SPECMULT_STATUS_UNSUPPORTED_MODE = 7,
  SPECMULT_STATUS_NUMERICAL = 8,
  SPECMULT_STATUS_DIVERGENCE = 9,
  SPECMULT_STATUS_UNKNOWN_EXPERIMENT = 10,
  SPECMULT_STATUS_IO = 11,
  SPECMULT_STATUS_JSON = 12,
  SPECMULT_STATUS_CSV = 13,
  SPECMULT_STATUS_OUT_OF_RANGE = 14,
  SPECMULT_STATUS_PANIC = 15,
} SpecmultStatus;

/**
 * An experiment configuration.
 */
typedef struct SpecmultConfig SpecmultConfig;

/**
 * Files written and flags raised by one run.
 */
typedef struct SpecmultOutcome SpecmultOutcome;

/**
 * The discrete Riesz transform `R_r` on `Z_K^d` for the simple walk.
 */
typedef struct SpecmultRiesz SpecmultRiesz;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call into the library on this thread.
 */
const char *specmult_last_error(void);

/**
 * Library version as a static string.
 */
const char *specmult_version(void);

/**
 * Number of registered experiments.
 */
size_t specmult_experiment_count(void);

/**
 * Name of experiment `index` as a static string, or null when out of range.
 */
const char *specmult_experiment_name(size_t index);

/**
 * Parses a JSON configuration. A relative `output` is kept as given.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
SpecmultStatus specmult_config_from_json(const char *json, SpecmultConfig **out);

/**
 * Reads a JSON configuration file; a relative `output` resolves against the
 * file's directory.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
SpecmultStatus specmult_config_from_file(const char *path, SpecmultConfig **out);

/**
 * Replaces the seed of a configuration.
 *
 * # Safety
 * `config` must be a handle from this library.
 */
SpecmultStatus specmult_config_set_seed(SpecmultConfig *config, uint64_t seed);

/**
 * Replaces the output directory of a configuration.
 *
 * # Safety
 * `config` must be a handle from this library and `dir` a NUL-terminated string.
 */
SpecmultStatus specmult_config_set_output(SpecmultConfig *config, const char *dir);

/**
 * # Safety
 * `config` must be null or a handle from this library, released once.
 */
void specmult_config_free(SpecmultConfig *config);

/**
 * Runs the configured experiment and writes its files.
 *
 * # Safety
 * `config` must be a handle from this library and `out` a valid pointer.
 */
SpecmultStatus specmult_run(const SpecmultConfig *config, SpecmultOutcome **out);

/**
 * # Safety
 * `outcome` must be a handle from this library.
 */
size_t specmult_outcome_file_count(const SpecmultOutcome *outcome);

/**
 * Path of written file `index`, owned by `outcome`, or null when out of range.
 *
 * # Safety
 * `outcome` must be a handle from this library.
 */
const char *specmult_outcome_file(const SpecmultOutcome *outcome, size_t index);

/**
 * # Safety
 * `outcome` must be a handle from this library.
 */
size_t specmult_outcome_flag_count(const SpecmultOutcome *outcome);

/**
 * Flag `index`, owned by `outcome`, or null when out of range.
 *
 * # Safety
 * `outcome` must be a handle from this library.
 */
const char *specmult_outcome_flag(const SpecmultOutcome *outcome, size_t index);

/**
 * # Safety
 * `outcome` must be null or a handle from this library, released once.
 */
void specmult_outcome_free(SpecmultOutcome *outcome);

/**
 * Builds `R_r` on `Z_K^d`, `0 ≤ r < d`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
SpecmultStatus specmult_riesz_new(size_t k, size_t d, size_t r, SpecmultRiesz **out);

/**
 * Exact `L²` operator norm.
 *
 * # Safety
 * `riesz` must be a handle from this library and `value` a valid pointer.
 */
SpecmultStatus specmult_riesz_l2_norm(const SpecmultRiesz *riesz, double *value);

/**
 * Certified bracket `lower ≤ ‖R_r‖_{p→p} ≤ upper` for `p > 1`.
 *
 * # Safety
 * `riesz` must be a handle from this library; `lower` and `upper` valid pointers.
 */
SpecmultStatus specmult_riesz_lp_bounds(const SpecmultRiesz *riesz,
                                        double p,
                                        uint64_t seed,
                                        double *lower,
                                        double *upper);

/**
 * # Safety
 * `riesz` must be null or a handle from this library, released once.
 */
void specmult_riesz_free(SpecmultRiesz *riesz);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPECMULT_H */
