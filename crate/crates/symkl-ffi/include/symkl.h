/* C bindings for symkl: symmetric-power Kloosterman L-functions. */

#ifndef SYMKL_H
#define SYMKL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum SymklStatus {
  SymklStatus_Ok = 0,
  SymklStatus_InvalidParameter = 1,
  SymklStatus_BudgetExceeded = 2,
  SymklStatus_ComputationFailed = 3,
  SymklStatus_VerificationFailed = 4,
  SymklStatus_NullArgument = 5,
  SymklStatus_Io = 6,
} SymklStatus;

/**
 * Opaque handle owning configuration and warm pipelines.
 */
typedef struct SymklCtx SymklCtx;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string; do not free.
 */
const char *symkl_version(void);

/**
 * Last error message for this thread, or NULL when none; free with
 * symkl_string_free.
 */
char *symkl_last_error_message(void);

/**
 * New context; `cache_dir` may be NULL for no on-disk cache.
 */
struct SymklCtx *symkl_ctx_new(const char *cache_dir);

/**
 * Override the operation and field budgets (0 keeps the current value).
 */
enum SymklStatus symkl_ctx_set_budgets(struct SymklCtx *ctx,
                                       uint64_t op_budget,
                                       uint64_t field_budget);

void symkl_ctx_free(struct SymklCtx *ctx);

/**
 * Free a string returned by this library.
 */
void symkl_string_free(char *s);

/**
 * L(k, n, T) with all factors, as canonical JSON in *out_json.
 */
enum SymklStatus symkl_lfunction_json(struct SymklCtx *ctx,
                                      uint64_t p,
                                      uint32_t a,
                                      uint32_t n,
                                      uint32_t k,
                                      char **out_json);

/**
 * The non-trivial factor and its purity report, as canonical JSON.
 */
enum SymklStatus symkl_nontrivial_json(struct SymklCtx *ctx,
                                       uint64_t p,
                                       uint32_t a,
                                       uint32_t n,
                                       uint32_t k,
                                       char **out_json);

/**
 * Trivial factors and the orbit census, as canonical JSON; requires
 * n | q - 1.
 */
enum SymklStatus symkl_factors_json(struct SymklCtx *ctx,
                                    uint64_t p,
                                    uint32_t a,
                                    uint32_t n,
                                    uint32_t k,
                                    char **out_json);

/**
 * Weyl dimension; `alg` is one of "sl", "sp", "so", "g2". For g2 the
 * weight is k alpha_3 + b alpha_4 and `n` is ignored. The decimal string
 * lands in *out_decimal.
 */
enum SymklStatus symkl_repdim(const char *alg,
                              uint32_t n,
                              uint32_t k,
                              uint32_t b,
                              char **out_decimal);

/**
 * Run a named verification suite; Ok when every check passes,
 * VerificationFailed otherwise. The full report JSON lands in *out_json
 * when the pointer is non-NULL.
 */
enum SymklStatus symkl_verify_suite(const char *suite, char **out_json);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* SYMKL_H */
