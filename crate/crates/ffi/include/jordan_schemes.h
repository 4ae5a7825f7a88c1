#ifndef JORDAN_SCHEMES_H
#define JORDAN_SCHEMES_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes shared by every call.
 */
typedef enum JsStatus {
  JS_STATUS_OK = 0,
  JS_STATUS_NULL_POINTER = 1,
  JS_STATUS_INVALID_UTF8 = 2,
  JS_STATUS_PARSE_ERROR = 3,
  JS_STATUS_NOT_ADMISSIBLE = 4,
  JS_STATUS_AXIOM_VIOLATION = 5,
  JS_STATUS_INVALID_SCHEME = 6,
  JS_STATUS_ANALYSIS_FAILED = 7,
  JS_STATUS_PANIC = 8,
} JsStatus;

typedef enum JsVerdict {
  JS_VERDICT_ASSOCIATION_SCHEME = 0,
  JS_VERDICT_IMPROPER_JORDAN = 1,
  JS_VERDICT_PROPER_JORDAN = 2,
} JsVerdict;

/**
 * Opaque verified or unverified Jordan scheme.
 */
typedef struct JsScheme JsScheme;

/**
 * Opaque sign matrix.
 */
typedef struct JsSignMatrix JsSignMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread, or null.
 * The pointer stays valid until the next call into the library.
 */
const char *js_last_error(void);

/**
 * Releases a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void js_string_free(char *s);

/**
 * Parses `+`/`-` rows into a sign matrix.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` writable.
 */
enum JsStatus js_sign_matrix_parse(const char *text, struct JsSignMatrix **out);

/**
 * # Safety
 * `m` must be null or a live handle from [`js_sign_matrix_parse`].
 */
void js_sign_matrix_free(struct JsSignMatrix *m);

/**
 * # Safety
 * `m` must be a live handle.
 */
size_t js_sign_matrix_order(const struct JsSignMatrix *m);

/**
 * Writes whether the admissibility condition holds.
 *
 * # Safety
 * `m` must be a live handle and `out` writable.
 */
enum JsStatus js_sign_matrix_is_admissible(const struct JsSignMatrix *m, bool *out);

/**
 * Builds the Jordan scheme on `4 * order` points.
 *
 * # Safety
 * `m` must be a live handle and `out` writable.
 */
enum JsStatus js_scheme_build(const struct JsSignMatrix *m, struct JsScheme **out);

/**
 * Reads a scheme from its JSON form.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` writable.
 */
enum JsStatus js_scheme_from_json(const char *text, struct JsScheme **out);

/**
 * # Safety
 * `s` must be a live handle and `out` writable.
 */
enum JsStatus js_scheme_to_json(const struct JsScheme *s, char **out);

/**
 * # Safety
 * `s` must be null or a live handle.
 */
void js_scheme_free(struct JsScheme *s);

/**
 * Number of points, or 0 for null.
 *
 * # Safety
 * `s` must be null or a live handle.
 */
size_t js_scheme_order(const struct JsScheme *s);

/**
 * Number of classes including the diagonal, or 0 for null.
 *
 * # Safety
 * `s` must be null or a live handle.
 */
size_t js_scheme_class_count(const struct JsScheme *s);

/**
 * Checks the Jordan scheme axioms; the violation is left in the error slot.
 *
 * # Safety
 * `s` must be a live handle.
 */
enum JsStatus js_scheme_verify(const struct JsScheme *s);

/**
 * Classifies a verified scheme. `evidence_json` may be null; otherwise it
 * receives the closure dimensions as JSON.
 *
 * # Safety
 * `s` must be a live handle, `verdict` writable, `evidence_json` null or writable.
 */
enum JsStatus js_scheme_classify(const struct JsScheme *s,
                                 enum JsVerdict *verdict,
                                 char **evidence_json);

/**
 * Hex encoding of the canonical isomorphism certificate.
 *
 * # Safety
 * `s` must be a live handle and `out` writable.
 */
enum JsStatus js_scheme_certificate(const struct JsScheme *s, char **out);

/**
 * # Safety
 * `a`, `b` must be live handles and `out` writable.
 */
enum JsStatus js_scheme_isomorphic(const struct JsScheme *a, const struct JsScheme *b, bool *out);

/**
 * Decomposes the adjacency algebra and writes the report as JSON.
 *
 * # Safety
 * `s` must be a live handle and `out` writable.
 */
enum JsStatus js_scheme_analyze(const struct JsScheme *s, uint64_t seed, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* JORDAN_SCHEMES_H */
