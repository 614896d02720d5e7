/*
 * C API for the matineq inequality checkers.
 *
 * Conventions:
 *  - Handles are opaque; free each exactly once with the matching *_free.
 *  - Fallible functions return a status code; 0 is success. After any
 *    nonzero status, matineq_last_error() returns a message valid on the
 *    calling thread until the next failing call.
 *  - char* outputs are owned by the caller: release with
 *    matineq_string_free. const char* returns are static or thread-local
 *    and must not be freed.
 */

#ifndef MATINEQ_H
#define MATINEQ_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. */
#define MATINEQ_OK 0
#define MATINEQ_ERR_NULL_ARGUMENT 1
#define MATINEQ_ERR_INVALID_UTF8 2
#define MATINEQ_ERR_CHECK 3
#define MATINEQ_ERR_NO_VALUE 4
#define MATINEQ_ERR_PANIC 5

/* Verdicts returned by matineq_result_verdict. */
#define MATINEQ_VERDICT_PASS 0
#define MATINEQ_VERDICT_VIOLATED 1
#define MATINEQ_VERDICT_HYPOTHESIS_UNMET 2
#define MATINEQ_VERDICT_ERROR 3

/* Synchrony modes for matineq_check_scalar (chebyshev-variance). */
#define MATINEQ_MODE_SYNCHRONOUS 0
#define MATINEQ_MODE_ASYNCHRONOUS 1
#define MATINEQ_MODE_UNSET (-1)

typedef struct MatineqMatrix MatineqMatrix;
typedef struct MatineqResult MatineqResult;

/* Library version; static, do not free. */
const char *matineq_version(void);

/* Most recent failure message on this thread; do not free. */
const char *matineq_last_error(void);

/*
 * Parse a Hermitian matrix from JSON:
 *   {"n": 2, "re": [a, b, b, d], "im": [0, x, -x, 0]}
 * with row-major entries and "im" optional. On success *out owns the
 * handle.
 */
int matineq_matrix_from_json(const char *json, MatineqMatrix **out);

int matineq_matrix_dim(const MatineqMatrix *m, size_t *out);

void matineq_matrix_free(MatineqMatrix *m);

/*
 * Run one matrix-order check. theorem_id is one of:
 *   matrix-fejer-lower, matrix-fejer-upper, log-fejer,
 *   eig-product-fejer, operator-levin-steckin, mond-pecaric-reverse.
 * alpha is only read by mond-pecaric-reverse. force != 0 evaluates even
 * when a hypothesis flag is unmet. A violated or errored check still
 * returns MATINEQ_OK with a result handle; inspect the verdict.
 */
int matineq_check_matrix(const char *theorem_id,
                         const char *function_id,
                         const char *weight_id,
                         const MatineqMatrix *a,
                         const MatineqMatrix *b,
                         double alpha,
                         int force,
                         MatineqResult **out);

/*
 * Run one scalar check on [lo, hi]; most scalar theorems fix [0, 1] and
 * ignore the endpoints. second_function_id and weight_id may be NULL when
 * the theorem does not use them. mode is one of the MATINEQ_MODE_*
 * constants and is only read by chebyshev-variance.
 */
int matineq_check_scalar(const char *theorem_id,
                         const char *function_id,
                         const char *second_function_id,
                         const char *weight_id,
                         double lo,
                         double hi,
                         double alpha,
                         int mode,
                         int force,
                         MatineqResult **out);

/* Verdict of a result (MATINEQ_VERDICT_*), or -1 for a null handle. */
int matineq_result_verdict(const MatineqResult *r);

/*
 * Worst slack of the result; negative when violated. Fails with
 * MATINEQ_ERR_NO_VALUE when the check never evaluated (gated or errored).
 */
int matineq_result_margin(const MatineqResult *r, double *out);

/* Full result as pretty JSON; release with matineq_string_free. */
int matineq_result_to_json(const MatineqResult *r, char **out);

void matineq_result_free(MatineqResult *r);

void matineq_string_free(char *s);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MATINEQ_H */
