#ifndef GAMMACALC_H
#define GAMMACALC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GcStatus {
  GC_STATUS_OK = 0,
  GC_STATUS_NULL_ARGUMENT = 1,
  GC_STATUS_INVALID_UTF8 = 2,
  GC_STATUS_INVALID_RING = 3,
  GC_STATUS_EVAL = 4,
  GC_STATUS_UNSUPPORTED = 5,
  GC_STATUS_PANIC = 6,
} GcStatus;

// Evaluation context fixing the coefficient ring.
typedef struct GcContext GcContext;

// An evaluated expression.
typedef struct GcValue GcValue;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failing call on this thread; empty after success.
// The pointer stays valid until the next call on the same thread.
const char *gc_last_error(void);

// Create a context for ring `Z`, `Q`, `Q(i)`, `Z/N` or `M2(Q)`.
//
// # Safety
// `ring` must be a nul-terminated string and `out` a valid pointer.
enum GcStatus gc_context_new(const char *ring, struct GcContext **out);

// # Safety
// `ctx` must come from `gc_context_new` and not be used afterwards.
void gc_context_free(struct GcContext *ctx);

// Parse and evaluate an expression.
//
// # Safety
// Pointers must be valid; `expr` nul-terminated.
enum GcStatus gc_eval(const struct GcContext *ctx, const char *expr, struct GcValue **out);

// # Safety
// `v` must come from `gc_eval` and not be used afterwards.
void gc_value_free(struct GcValue *v);

// Canonical text of a value; release with `gc_string_free`.
//
// # Safety
// Pointers must be valid.
enum GcStatus gc_value_render(const struct GcValue *v, char **out);

// Upper-left `n × n` window as JSON; release with `gc_string_free`.
//
// # Safety
// Pointers must be valid.
enum GcStatus gc_value_window_json(const struct GcContext *ctx,
                                   const struct GcValue *v,
                                   int64_t n,
                                   char **out);

// Decide `a = b`. Infinite sums compare on a `window_n` window.
//
// # Safety
// Pointers must be valid.
enum GcStatus gc_equal(const struct GcContext *ctx,
                       const struct GcValue *a,
                       const struct GcValue *b,
                       int64_t window_n,
                       bool *out);

// Membership in an ideal tagged `cf`, `c0`, `lp:P`, `lp+:P`, `lp-:P` or `linf`.
//
// # Safety
// Pointers must be valid; `tag` nul-terminated.
enum GcStatus gc_member(const struct GcContext *ctx,
                        const struct GcValue *v,
                        const char *tag,
                        bool *out);

// Decompose a matrix given as JSON `{"rows","cols","entries":[[i,j,"v"],..]}`
// into band-one components; the result is JSON, released with `gc_string_free`.
//
// # Safety
// Pointers must be valid; `matrix_json` nul-terminated.
enum GcStatus gc_decompose_json(const struct GcContext *ctx, const char *matrix_json, char **out);

// Run one identity suite.
//
// # Safety
// Pointers must be valid; `name` nul-terminated.
enum GcStatus gc_verify_suite(const char *name,
                              uint64_t seed,
                              uintptr_t trials,
                              uintptr_t *passed,
                              uintptr_t *total);

// # Safety
// `s` must come from this library and not be used afterwards.
void gc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GAMMACALC_H */
