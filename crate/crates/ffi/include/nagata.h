#ifndef NAGATA_H
#define NAGATA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum NgtStatus {
  NGT_STATUS_OK = 0,
  NGT_STATUS_NULL_POINTER = 1,
  NGT_STATUS_INVALID_UTF8 = 2,
  NGT_STATUS_PARSE_ERROR = 3,
  NGT_STATUS_RUNTIME_ERROR = 4,
  NGT_STATUS_PANIC = 5,
} NgtStatus;

typedef enum NgtVerdict {
  NGT_VERDICT_PASS = 0,
  NGT_VERDICT_FAIL = 1,
  NGT_VERDICT_INDETERMINATE = 2,
  NGT_VERDICT_ERROR = 3,
} NgtVerdict;

/**
 * The outcome of running a script.
 */
typedef struct NgtReport NgtReport;

/**
 * A parsed script.
 */
typedef struct NgtScript NgtScript;

/**
 * Zero in `precision`, `max_exponent` or `y_degree` keeps the script's
 * or the library's default.
 */
typedef struct NgtRunOptions {
  uint64_t seed;
  uint64_t precision;
  uint32_t max_exponent;
  uint32_t y_degree;
  bool timing;
} NgtRunOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failing call on this thread, or null. Valid until
 * the next failing call.
 */
const char *ngt_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ngt_version(void);

struct NgtRunOptions ngt_run_options_default(void);

/**
 * Parses `text`; on `NGT_STATUS_PARSE_ERROR` the message carries the line
 * and column.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a writable pointer.
 */
enum NgtStatus ngt_script_parse(const char *text, struct NgtScript **out);

/**
 * # Safety
 * `script` must come from [`ngt_script_parse`] and not be used afterwards.
 */
void ngt_script_free(struct NgtScript *script);

/**
 * Canonical text of the script.
 *
 * # Safety
 * `script` must be a live handle and `out` a writable pointer.
 */
enum NgtStatus ngt_script_print(const struct NgtScript *script, char **out);

/**
 * Runs every check. Check failures are recorded in the report, not
 * returned as a status. A null `options` uses the defaults.
 *
 * # Safety
 * `script` must be a live handle, `options` null or valid, `out` writable.
 */
enum NgtStatus ngt_run(const struct NgtScript *script,
                       const struct NgtRunOptions *options,
                       struct NgtReport **out);

/**
 * # Safety
 * `report` must come from [`ngt_run`] and not be used afterwards.
 */
void ngt_report_free(struct NgtReport *report);

/**
 * # Safety
 * `report` must be a live handle and `out` a writable pointer.
 */
enum NgtStatus ngt_report_json(const struct NgtReport *report, char **out);

/**
 * # Safety
 * `report` must be a live handle and `out` a writable pointer.
 */
enum NgtStatus ngt_report_text(const struct NgtReport *report, char **out);

/**
 * Number of checks in the report; 0 for a null handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
size_t ngt_report_len(const struct NgtReport *report);

/**
 * Verdict of the check at `index`.
 *
 * # Safety
 * `report` must be a live handle and `out` a writable pointer.
 */
enum NgtStatus ngt_report_verdict(const struct NgtReport *report,
                                  size_t index,
                                  enum NgtVerdict *out);

/**
 * Process exit code the command-line runner would use: 0, 1 on a fail or
 * error verdict, 2 on an indeterminate verdict under `strict`. -1 for a
 * null handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
int32_t ngt_report_exit_code(const struct NgtReport *report, bool strict);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void ngt_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NAGATA_H */
