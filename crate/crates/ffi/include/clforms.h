#ifndef CLFORMS_H
#define CLFORMS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum ClfStatus {
  CLF_STATUS_OK = 0,
  CLF_STATUS_NULL_POINTER = 1,
  CLF_STATUS_INVALID_UTF8 = 2,
  CLF_STATUS_INVALID_ARGUMENT = 3,
  CLF_STATUS_PARSE = 4,
  CLF_STATUS_CAP_EXCEEDED = 5,
  CLF_STATUS_NOT_CL = 6,
  CLF_STATUS_INTERNAL = 7,
} ClfStatus;

// Example families for `clf_construct`.
typedef enum ClfKind {
  // `arg`: index of the point in canonical order.
  CLF_KIND_PENCIL = 0,
  // `arg`: number of pencils.
  CLF_KIND_FOOTNOTE_PENCILS = 1,
  // `arg`: hyperplane index.
  CLF_KIND_HYPERPLANE = 2,
  // `arg`: number of hyperplanes.
  CLF_KIND_HYPERPLANE_UNION = 3,
  // `arg`: the family parameter `y`.
  CLF_KIND_NONTRIVIAL_FAMILY = 4,
  // `arg`: multiplier seed of the field spread.
  CLF_KIND_SPREAD = 5,
} ClfKind;

// Verification depth for `clf_context_new`.
typedef enum ClfLevel {
  // Counting test and sampled spreads only.
  CLF_LEVEL_FAST = 0,
  // Also the exact linear-algebra tests.
  CLF_LEVEL_FULL = 1,
} ClfLevel;

// Precomputed tables for deciding membership.
typedef struct ClfContext ClfContext;

// A set of vertices.
typedef struct ClfSet ClfSet;

// Parameters `(q, n, l)` of a bilinear forms graph.
typedef struct ClfSpace ClfSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failure on this thread, or NULL. Valid until the next call into the library.
const char *clf_last_error(void);

// # Safety
// `s` must be NULL or a string returned by this library, not yet freed.
void clf_string_free(char *s);

// # Safety
// `out` must be valid for writes.
enum ClfStatus clf_space_new(uint32_t q, size_t n, size_t l, struct ClfSpace **out);

// # Safety
// `space` must be NULL or a live handle.
void clf_space_free(struct ClfSpace *space);

// # Safety
// `space` must be a live handle and `out` valid for writes.
enum ClfStatus clf_space_num_vertices(const struct ClfSpace *space, size_t *out);

// # Safety
// `space` must be a live handle and `out` valid for writes.
enum ClfStatus clf_set_new_empty(const struct ClfSpace *space, struct ClfSet **out);

// Parses the vertex-set text format.
//
// # Safety
// `src` must be a nul-terminated string and `out` valid for writes.
enum ClfStatus clf_set_parse(const char *src, struct ClfSet **out);

// Writes `set` in the vertex-set text format; free the result with `clf_string_free`.
//
// # Safety
// `set` must be a live handle and `out` valid for writes.
enum ClfStatus clf_set_to_text(const struct ClfSet *set, char **out);

// # Safety
// `set` must be NULL or a live handle.
void clf_set_free(struct ClfSet *set);

// # Safety
// `set` must be a live handle.
enum ClfStatus clf_set_insert(struct ClfSet *set, size_t idx);

// # Safety
// `set` must be a live handle and `out` valid for writes.
enum ClfStatus clf_set_contains(const struct ClfSet *set, size_t idx, bool *out);

// # Safety
// `set` must be a live handle and `out` valid for writes.
enum ClfStatus clf_set_len(const struct ClfSet *set, size_t *out);

// Copies up to `cap` member indices (ascending) into `buf`; `out_len` receives the set size.
//
// # Safety
// `set` must be a live handle, `buf` valid for `cap` writes (or NULL when `cap` is 0)
// and `out_len` valid for writes.
enum ClfStatus clf_set_members(const struct ClfSet *set, size_t *buf, size_t cap, size_t *out_len);

// Builds one of the example families.
//
// # Safety
// `space` must be a live handle and `out` valid for writes.
enum ClfStatus clf_construct(const struct ClfSpace *space,
                             enum ClfKind kind,
                             uint64_t arg,
                             struct ClfSet **out);

// # Safety
// `space` must be a live handle and `out` valid for writes.
enum ClfStatus clf_context_new(const struct ClfSpace *space,
                               enum ClfLevel level,
                               uint64_t seed,
                               struct ClfContext **out);

// # Safety
// `ctx` must be NULL or a live handle.
void clf_context_free(struct ClfContext *ctx);

// Decides membership. `out_x` (optional) receives the parameter as a decimal
// or `p/q` string; free it with `clf_string_free`.
//
// # Safety
// `ctx` and `set` must be live handles, `out_is_cl` valid for writes, `out_x` NULL or valid for writes.
enum ClfStatus clf_verdict(const struct ClfContext *ctx,
                           const struct ClfSet *set,
                           bool *out_is_cl,
                           char **out_x);

// The full verdict, with per-test outcomes and witnesses, as JSON.
//
// # Safety
// `ctx` and `set` must be live handles and `out` valid for writes.
enum ClfStatus clf_verdict_json(const struct ClfContext *ctx, const struct ClfSet *set, char **out);

// Runs the command-line interface in-process. `argv` excludes the program
// name. Captured output goes to `out_stdout` / `out_stderr` (free both with
// `clf_string_free`); `out_exit` receives the exit code.
//
// # Safety
// `argv` must point to `argc` nul-terminated strings; the outputs must be valid for writes.
enum ClfStatus clf_cli_run(const char *const *argv,
                           size_t argc,
                           char **out_stdout,
                           char **out_stderr,
                           int32_t *out_exit);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CLFORMS_H */
