#ifndef INERTIA_FORMS_H
#define INERTIA_FORMS_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum InertiaFormsStatus {
  INERTIA_FORMS_STATUS_OK = 0,
  INERTIA_FORMS_STATUS_NULL_POINTER = 1,
  INERTIA_FORMS_STATUS_INVALID_UTF8 = 2,
  INERTIA_FORMS_STATUS_CONFIG = 3,
  INERTIA_FORMS_STATUS_STRUCTURAL = 4,
  /**
   * The run completed but at least one assertion failed.
   */
  INERTIA_FORMS_STATUS_THEOREM_VIOLATION = 5,
  INERTIA_FORMS_STATUS_INTERNAL = 6,
  INERTIA_FORMS_STATUS_PANIC = 7,
} InertiaFormsStatus;

/**
 * Opaque scenario handle.
 */
typedef struct InertiaFormsScenario InertiaFormsScenario;

/**
 * Per-run overrides. Negative fields keep the scenario's value.
 */
typedef struct InertiaFormsRunOptions {
  int64_t cutoff;
  int64_t seed;
  int64_t samples;
  bool fault;
} InertiaFormsRunOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a scenario from JSON text.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum InertiaFormsStatus inertia_forms_scenario_from_json(const char *json,
                                                         struct InertiaFormsScenario **out);

/**
 * Releases a scenario. Null is ignored.
 *
 * # Safety
 * `handle` must come from [`inertia_forms_scenario_from_json`] and not be
 * used afterwards.
 */
void inertia_forms_scenario_free(struct InertiaFormsScenario *handle);

/**
 * Runs a CLI command (`verify`, `dims`, `cohomology`, ...) and writes the
 * JSON report to `out_json`. `options` may be null.
 *
 * A report is written for both `Ok` and `TheoremViolation`.
 *
 * # Safety
 * `handle` must be live, `command` a valid NUL-terminated string and
 * `out_json` a valid pointer.
 */
enum InertiaFormsStatus inertia_forms_run(const struct InertiaFormsScenario *handle,
                                          const char *command,
                                          const struct InertiaFormsRunOptions *options,
                                          char **out_json);

/**
 * Dimension of the basic forms of weight `weight` and degree `degree`.
 *
 * # Safety
 * `handle` must be live and `out` a valid pointer.
 */
enum InertiaFormsStatus inertia_forms_basic_dim(const struct InertiaFormsScenario *handle,
                                                uint32_t weight,
                                                uint32_t degree,
                                                size_t *out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void inertia_forms_string_free(char *s);

/**
 * Message for the last failure on this thread, or null. Valid until the
 * next call into the library on the same thread.
 */
const char *inertia_forms_last_error(void);

/**
 * Library version as a static string.
 */
const char *inertia_forms_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* INERTIA_FORMS_H */
