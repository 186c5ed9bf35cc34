#ifndef TRIHELIX_H
#define TRIHELIX_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

#define TRIHELIX_AXIS_GEO 0

#define TRIHELIX_AXIS_ORG 1

#define TRIHELIX_AXIS_TECH 2

typedef enum TrihelixStatus {
  TRIHELIX_STATUS_OK = 0,
  TRIHELIX_STATUS_NULL_ARGUMENT = 1,
  TRIHELIX_STATUS_INVALID_ARGUMENT = 2,
  TRIHELIX_STATUS_DATA_ERROR = 3,
  TRIHELIX_STATUS_NUMERIC_DEGENERACY = 4,
  TRIHELIX_STATUS_BUFFER_TOO_SMALL = 5,
  TRIHELIX_STATUS_PANIC = 6,
} TrihelixStatus;

/*
 Yearly sequence of tensors sharing category labels.
 */
typedef struct TrihelixPanel TrihelixPanel;

/*
 Count tensor over (geo, org, tech).
 */
typedef struct TrihelixTensor TrihelixTensor;

/*
 Shannon entropies in bits.
 */
typedef struct TrihelixEntropies {
  double h1;
  double h2;
  double h3;
  double h12;
  double h13;
  double h23;
  double h123;
  double synergy;
} TrihelixEntropies;

/*
 Branch: -1 negative T, 0 zero T, 1 positive T.
 */
typedef struct TrihelixPower {
  double tau;
  int32_t branch;
} TrihelixPower;

/*
 Classification: -1 anti-persistent, 0 random, 1 persistent.
 */
typedef struct TrihelixHurst {
  double h;
  double intercept;
  double r_squared;
  int32_t classification;
  size_t points;
} TrihelixHurst;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread, or null. Valid until the
 next call into this library from the same thread.
 */
const char *trihelix_last_error(void);

/*
 Builds a tensor from row-major counts of the given shape.

 # Safety
 `shape` must point to 3 values, `counts` to `len` values, `out_tensor` to
 writable storage.
 */
enum TrihelixStatus trihelix_tensor_new(const size_t *shape,
                                        const uint64_t *counts,
                                        size_t len,
                                        struct TrihelixTensor **out_tensor);

/*
 # Safety
 `tensor` must come from `trihelix_tensor_new` and not be used afterwards.
 */
void trihelix_tensor_free(struct TrihelixTensor *tensor);

/*
 # Safety
 Pointers must be valid.
 */
enum TrihelixStatus trihelix_tensor_entropies(const struct TrihelixTensor *tensor,
                                              struct TrihelixEntropies *out_entropies);

/*
 Synergy T in bits.

 # Safety
 Pointers must be valid.
 */
enum TrihelixStatus trihelix_tensor_synergy(const struct TrihelixTensor *tensor, double *out_bits);

/*
 # Safety
 Pointers must be valid.
 */
enum TrihelixStatus trihelix_tensor_transmission_power(const struct TrihelixTensor *tensor,
                                                       struct TrihelixPower *out_power);

/*
 Per-group synergy contributions (bits) along `axis`.

 # Safety
 `out_values` must hold `capacity` values; other pointers must be valid.
 */
enum TrihelixStatus trihelix_tensor_decompose(const struct TrihelixTensor *tensor,
                                              uint32_t axis_index,
                                              double *out_values,
                                              size_t capacity,
                                              size_t *out_len);

/*
 Reads a long-format CSV (year,geo,org,tech,count).

 # Safety
 `path` must be a NUL-terminated string; `out_panel` must be writable.
 */
enum TrihelixStatus trihelix_panel_read(const char *path, struct TrihelixPanel **out_panel);

/*
 # Safety
 `panel` must come from `trihelix_panel_read` and not be used afterwards.
 */
void trihelix_panel_free(struct TrihelixPanel *panel);

/*
 Number of years, 0 for null.

 # Safety
 `panel` must be null or valid.
 */
size_t trihelix_panel_len(const struct TrihelixPanel *panel);

/*
 National synergy per year, bits.

 # Safety
 `out_values` must hold `capacity` values; other pointers must be valid.
 */
enum TrihelixStatus trihelix_panel_synergy_series(const struct TrihelixPanel *panel,
                                                  double *out_values,
                                                  size_t capacity,
                                                  size_t *out_len);

/*
 Full report as canonical JSON. Release with `trihelix_string_free`.

 # Safety
 Pointers must be valid.
 */
enum TrihelixStatus trihelix_panel_report_json(const struct TrihelixPanel *panel,
                                               uint32_t axis_index,
                                               size_t fit_degree,
                                               char **out_json);

/*
 # Safety
 `s` must come from this library and not be used afterwards.
 */
void trihelix_string_free(char *s);

/*
 Fourier coefficients of `values`: the constant term and B_l, D_l for
 l = 1 ..= len/2.

 # Safety
 `values` must hold `len` values, `out_b` and `out_d` `capacity` values.
 */
enum TrihelixStatus trihelix_dft(const double *values,
                                 size_t len,
                                 double *out_constant,
                                 double *out_b,
                                 double *out_d,
                                 size_t capacity,
                                 size_t *out_count);

/*
 Rescaled-range Hurst exponent. `full_series_mean` selects the whole-series
 mean for the cumulative deviate instead of the prefix mean.

 # Safety
 `values` must hold `len` values; `out_hurst` must be writable.
 */
enum TrihelixStatus trihelix_hurst(const double *values,
                                   size_t len,
                                   bool full_series_mean,
                                   struct TrihelixHurst *out_hurst);

/*
 Least-squares polynomial, coefficients in ascending powers.

 # Safety
 `x`, `y` must hold `n` values, `out_coefficients` `capacity` values.
 */
enum TrihelixStatus trihelix_polyfit(const double *x,
                                     const double *y,
                                     size_t n,
                                     size_t degree,
                                     double *out_coefficients,
                                     size_t capacity,
                                     size_t *out_len,
                                     double *out_r_squared);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRIHELIX_H */
