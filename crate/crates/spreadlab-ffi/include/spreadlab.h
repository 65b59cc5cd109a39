#ifndef SPREADLAB_H
#define SPREADLAB_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SlStatus {
  SL_STATUS_OK = 0,
  SL_STATUS_NULL_POINTER = 1,
  SL_STATUS_INVALID_UTF8 = 2,
  SL_STATUS_PARSE = 3,
  SL_STATUS_CAPACITY = 4,
  SL_STATUS_DOMAIN = 5,
  SL_STATUS_INDEX = 6,
  SL_STATUS_SHAPE = 7,
  SL_STATUS_IO = 8,
  /**
   * Output buffer too small; the required length is reported.
   */
  SL_STATUS_BUFFER_TOO_SMALL = 9,
  SL_STATUS_PANIC = 10,
} SlStatus;

/**
 * A family of graphs on `[n]`.
 */
typedef struct SlFamily SlFamily;

/**
 * An array model.
 */
typedef struct SlModel SlModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Owned by the
 * library; valid until the next failing call on the same thread.
 */
const char *sl_last_error(void);

/**
 * Report schema version, a static string.
 */
const char *sl_schema_version(void);

/**
 * Sets the enumeration cap used by every later call.
 */
void sl_set_cap(uint64_t cap);

/**
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void sl_string_free(char *s);

/**
 * Builds a model from its JSON description; `n == 0` takes the ground set
 * from the JSON.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out_model` writable.
 */
enum SlStatus sl_model_from_json(const char *json, size_t n, struct SlModel **out_model);

/**
 * The closed-form two-dimensional counterexample on `[n]`.
 *
 * # Safety
 * `out_model` must be writable.
 */
enum SlStatus sl_model_appendix_a_2d(size_t n, struct SlModel **out_model);

/**
 * Product array `X_s = ∏_{i∈s} ξ_i` with every `P(ξ_i = 1) = num/den`.
 *
 * # Safety
 * `out_model` must be writable.
 */
enum SlStatus sl_model_product(size_t n,
                               size_t d,
                               int64_t num,
                               int64_t den,
                               struct SlModel **out_model);

/**
 * # Safety
 * `m` must come from this library and not be freed twice.
 */
void sl_model_free(struct SlModel *m);

/**
 * # Safety
 * `m` must be a live handle; outputs writable.
 */
enum SlStatus sl_model_shape(const struct SlModel *m, size_t *n, size_t *d, size_t *alphabet);

/**
 * The model as a JSON spec string (free with `sl_string_free`).
 *
 * # Safety
 * `m` must be a live handle; `json` writable.
 */
enum SlStatus sl_model_to_json(const struct SlModel *m, char **json);

/**
 * `E ∏_{s∈ℱ} 1[X_s = 1]` for `count` index sets of size `d`, given as
 * `count·d` 1-based elements. The exact value, when there is one, is
 * written as `"p/q"` to `exact` if it is non-null.
 *
 * # Safety
 * `elems` must hold `count·d` values; `value` writable; `exact` null or writable.
 */
enum SlStatus sl_model_moment(const struct SlModel *m,
                              const uint32_t *elems,
                              size_t count,
                              double *value,
                              char **exact);

/**
 * Spreadability defect over subarray sizes up to `size_cap`.
 *
 * # Safety
 * `m` must be a live handle; `value` writable.
 */
enum SlStatus sl_spreadability_defect(const struct SlModel *m, size_t size_cap, double *value);

/**
 * Box-independence defect for one symbol; `absolute != 0` takes `|·|`.
 *
 * # Safety
 * `m` must be a live handle; `value` writable.
 */
enum SlStatus sl_box_defect(const struct SlModel *m, uint32_t symbol, int absolute, double *value);

/**
 * Writes `γ_1 … γ_kmax` into `buf`, which must hold `kmax` values.
 *
 * # Safety
 * `buf` must be writable for `buf_len` values.
 */
enum SlStatus sl_gamma_table(double eta,
                             double theta,
                             size_t d,
                             size_t n,
                             size_t kmax,
                             double *buf,
                             size_t buf_len);

/**
 * A named graph property on `[n]`, tabulated when `n` is small enough.
 *
 * # Safety
 * `name` must be NUL-terminated; `out_family` writable.
 */
enum SlStatus sl_family_builtin(const char *name, size_t n, struct SlFamily **out_family);

/**
 * # Safety
 * `f` must come from this library and not be freed twice.
 */
void sl_family_free(struct SlFamily *f);

/**
 * `γ` of the family at the 4-set `u` (1-based). Sampled families use
 * `samples` draws from `seed`; `std_error` receives 0 for exact values.
 *
 * # Safety
 * `f` must be a live handle; `u` must hold 4 values; outputs writable.
 */
enum SlStatus sl_family_gamma(const struct SlFamily *f,
                              const uint32_t *u,
                              uint64_t samples,
                              uint64_t seed,
                              double *value,
                              double *std_error);

/**
 * Runs a command line (`argv[0]` is the program name) and returns its
 * report and exit code (0 ok, 1 usage or capacity, 2 failed inequality).
 * The report is written even on failure; errors go to `sl_last_error`.
 *
 * # Safety
 * `argv` must hold `argc` NUL-terminated strings; outputs writable.
 */
enum SlStatus sl_run(int argc, const char *const *argv, char **report, int *exit_code);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPREADLAB_H */
