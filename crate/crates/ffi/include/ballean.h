#ifndef BALLEAN_H
#define BALLEAN_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BalleanFormat {
  BALLEAN_FORMAT_PLAIN = 0,
  /**
   * `name<TAB>property<TAB>verdict` per record.
   */
  BALLEAN_FORMAT_LINES = 1,
} BalleanFormat;

/**
 * Status codes returned by every fallible function.
 */
typedef enum BalleanStatus {
  BALLEAN_STATUS_OK = 0,
  BALLEAN_STATUS_NULL_POINTER = 1,
  BALLEAN_STATUS_INVALID_UTF8 = 2,
  BALLEAN_STATUS_PARSE = 3,
  BALLEAN_STATUS_ENCODING = 4,
  BALLEAN_STATUS_GROUND_MISMATCH = 5,
  BALLEAN_STATUS_UNSUPPORTED = 6,
  BALLEAN_STATUS_DOMAIN = 7,
  BALLEAN_STATUS_PRECONDITION = 8,
  BALLEAN_STATUS_INCONSISTENCY = 9,
  BALLEAN_STATUS_OUT_OF_RANGE = 10,
  BALLEAN_STATUS_PANIC = 11,
} BalleanStatus;

/**
 * The verdict carried by one report record.
 */
typedef enum BalleanVerdict {
  BALLEAN_VERDICT_TRUE = 0,
  BALLEAN_VERDICT_FALSE = 1,
  BALLEAN_VERDICT_UNKNOWN = 2,
  BALLEAN_VERDICT_ERROR = 3,
  /**
   * Counts, cardinals and other informational lines.
   */
  BALLEAN_VERDICT_INFO = 4,
} BalleanVerdict;

/**
 * A parsed, type-checked instance document.
 */
typedef struct BalleanDocument BalleanDocument;

/**
 * The rendered output of a run together with its records.
 */
typedef struct BalleanReport BalleanReport;

/**
 * Run options. `eps_den == 0` selects the default grid 1/2, 1/4, 1/8.
 */
typedef struct BalleanOptions {
  uint64_t horizon;
  uint64_t eps_num;
  uint64_t eps_den;
  enum BalleanFormat format;
} BalleanOptions;

/**
 * A record view. The strings are borrowed from the report and live as long
 * as it does.
 */
typedef struct BalleanRecord {
  const char *name;
  const char *property;
  const char *text;
  enum BalleanVerdict verdict;
} BalleanRecord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Default options: horizon 4096, the default eps grid, plain output.
 */
struct BalleanOptions ballean_options_default(void);

/**
 * The message of the last failing call on this thread, or null. Valid until
 * the next failing call on this thread.
 */
const char *ballean_last_error(void);

/**
 * The library version as a static NUL-terminated string.
 */
const char *ballean_version(void);

/**
 * Parses and type-checks an instance document.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum BalleanStatus ballean_document_parse(const char *text, struct BalleanDocument **out);

/**
 * Releases a document. Null is ignored.
 *
 * # Safety
 * `doc` must come from [`ballean_document_parse`] and not be freed twice.
 */
void ballean_document_free(struct BalleanDocument *doc);

/**
 * Number of directives in a document, 0 for null.
 *
 * # Safety
 * `doc` must be null or a live document.
 */
size_t ballean_document_directive_count(const struct BalleanDocument *doc);

/**
 * The canonical rendering of a document, to be released with
 * [`ballean_string_free`].
 *
 * # Safety
 * `doc` must be a live document and `out` a valid pointer.
 */
enum BalleanStatus ballean_document_render(const struct BalleanDocument *doc, char **out);

/**
 * Runs every directive of a document. `opts` may be null for defaults.
 *
 * # Safety
 * `doc` must be a live document, `opts` null or valid, `out` a valid pointer.
 */
enum BalleanStatus ballean_document_run(const struct BalleanDocument *doc,
                                        const struct BalleanOptions *opts,
                                        struct BalleanReport **out);

/**
 * Property report for one ballean expression, e.g. `(metric-nat)`.
 *
 * # Safety
 * `expr` must be a NUL-terminated string, `opts` null or valid, `out` a
 * valid pointer.
 */
enum BalleanStatus ballean_infer(const char *expr,
                                 const struct BalleanOptions *opts,
                                 struct BalleanReport **out);

/**
 * Releases a report. Null is ignored.
 *
 * # Safety
 * `report` must come from this library and not be freed twice.
 */
void ballean_report_free(struct BalleanReport *report);

/**
 * The rendered report, borrowed from the handle.
 *
 * # Safety
 * `report` must be null or a live report.
 */
const char *ballean_report_text(const struct BalleanReport *report);

/**
 * 0 when every verdict is TRUE, 1 on a FALSE, 2 on an UNKNOWN, 3 on an
 * error; 3 for null.
 *
 * # Safety
 * `report` must be null or a live report.
 */
int32_t ballean_report_exit_code(const struct BalleanReport *report);

/**
 * # Safety
 * `report` must be null or a live report.
 */
size_t ballean_report_record_count(const struct BalleanReport *report);

/**
 * Fills `out` with a view of record `index`.
 *
 * # Safety
 * `report` must be a live report and `out` a valid pointer.
 */
enum BalleanStatus ballean_report_record(const struct BalleanReport *report,
                                         size_t index,
                                         struct BalleanRecord *out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void ballean_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BALLEAN_H */
