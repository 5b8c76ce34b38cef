#ifndef VARKIT_H
#define VARKIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * How divided-difference tables are computed from values.
 */
typedef enum VarkitMethod {
  /**
   * Newton recursion on the values.
   */
  VARKIT_METHOD_RECURSION = 0,
  /**
   * Confluent divided-difference tableau; more stable under cancellation.
   */
  VARKIT_METHOD_TABLEAU = 1,
} VarkitMethod;

/**
 * Outcome of a fallible call.
 */
typedef enum VarkitStatus {
  VARKIT_STATUS_OK = 0,
  VARKIT_STATUS_INVALID_ARGUMENT = 1,
  VARKIT_STATUS_NULL_POINTER = 2,
  /**
   * A query left the disc on which a truncated variety is complete.
   */
  VARKIT_STATUS_TRUNCATION = 3,
  VARKIT_STATUS_DUPLICATE_NODE = 4,
  /**
   * A derivative beyond what the function supports was needed.
   */
  VARKIT_STATUS_ORDER = 5,
  VARKIT_STATUS_ILL_CONDITIONED = 6,
  VARKIT_STATUS_SINGULAR_QUADRATURE = 7,
  VARKIT_STATUS_NO_ALPHA_FOUND = 8,
  VARKIT_STATUS_NO_SAMPLES = 9,
  VARKIT_STATUS_PARSE = 10,
  VARKIT_STATUS_IO = 11,
  /**
   * An internal error was caught at the boundary.
   */
  VARKIT_STATUS_PANIC = 12,
} VarkitStatus;

typedef enum VarkitVerdict {
  VARKIT_VERDICT_BOUNDED = 0,
  VARKIT_VERDICT_DIVERGENT = 1,
  VARKIT_VERDICT_INCONCLUSIVE = 2,
} VarkitVerdict;

/**
 * Growth fit and verdict for one condition.
 */
typedef struct VarkitFit VarkitFit;

/**
 * Newton coefficients `phi_{j,l}`.
 */
typedef struct VarkitTable VarkitTable;

/**
 * Values `w_{j,l}` aligned with a variety.
 */
typedef struct VarkitValues VarkitValues;

/**
 * Points with multiplicities, sorted by modulus then argument.
 */
typedef struct VarkitVariety VarkitVariety;

/**
 * Radial weight `p`.
 */
typedef struct VarkitWeight VarkitWeight;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or an empty string. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *varkit_last_error(void);

/**
 * Library version as a static string.
 */
const char *varkit_version(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void varkit_string_free(char *s);

/**
 * `p(r) = r^alpha`, `alpha > 0`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum VarkitStatus varkit_weight_power(double alpha, struct VarkitWeight **out);

/**
 * `p(r) = ln(1 + r^2)`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum VarkitStatus varkit_weight_log_poly(struct VarkitWeight **out);

/**
 * `p(r) = r`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum VarkitStatus varkit_weight_exp_type(struct VarkitWeight **out);

/**
 * `p(r)`.
 *
 * # Safety
 * `w` must be a live weight and `out` valid for writes.
 */
enum VarkitStatus varkit_weight_eval(const struct VarkitWeight *w, double r, double *out);

/**
 * # Safety
 * `w` must be null or a live weight; it is invalid afterwards.
 */
void varkit_weight_free(struct VarkitWeight *w);

/**
 * Builds a variety from `len` points `re[j] + i im[j]` with multiplicities
 * `mult[j]`. A negative `n_max` declares the variety finite; otherwise it is
 * complete inside `D(0, 2^n_max)`. Points are re-sorted by modulus and
 * argument when needed, which is reported through `resorted` if non-null.
 *
 * # Safety
 * The arrays must hold `len` elements; `out` must be valid for writes and
 * `resorted` null or valid for writes.
 */
enum VarkitStatus varkit_variety_new(const double *re,
                                     const double *im,
                                     const uint32_t *mult,
                                     size_t len,
                                     int32_t n_max,
                                     uint32_t bits,
                                     struct VarkitVariety **out,
                                     bool *resorted);

/**
 * Parses the text variety format (`re im mult` per line, `#` headers).
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` valid for writes.
 */
enum VarkitStatus varkit_variety_parse(const char *text, uint32_t bits, struct VarkitVariety **out);

/**
 * `{pi k : |pi k| <= 2^n_max}` with every multiplicity `mult`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum VarkitStatus varkit_variety_pi_lattice(uint32_t n_max,
                                            uint32_t mult,
                                            uint32_t bits,
                                            struct VarkitVariety **out);

/**
 * `{1, ..., 2^n_max}`, with the origin first when `include_origin`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum VarkitStatus varkit_variety_integers(uint32_t n_max,
                                          uint32_t mult,
                                          bool include_origin,
                                          uint32_t bits,
                                          struct VarkitVariety **out);

/**
 * Number of distinct points; 0 for a null handle.
 *
 * # Safety
 * `v` must be null or a live variety.
 */
size_t varkit_variety_len(const struct VarkitVariety *v);

/**
 * Sum of all multiplicities, which is the length of a value array; 0 for a
 * null handle.
 *
 * # Safety
 * `v` must be null or a live variety.
 */
uint64_t varkit_variety_total_multiplicity(const struct VarkitVariety *v);

/**
 * Point `j` (0-based) in sorted order.
 *
 * # Safety
 * `v` must be a live variety and the out-pointers valid for writes.
 */
enum VarkitStatus varkit_variety_point(const struct VarkitVariety *v,
                                       size_t j,
                                       double *re,
                                       double *im,
                                       uint32_t *mult);

/**
 * `n(z, r)`: total multiplicity in the closed disc `D(z, r)`.
 *
 * # Safety
 * `v` must be a live variety and `out` valid for writes.
 */
enum VarkitStatus varkit_variety_counting_n(const struct VarkitVariety *v,
                                            double re,
                                            double im,
                                            double r,
                                            uint64_t *out);

/**
 * `N(z, r)`: the integrated counting function.
 *
 * # Safety
 * `v` must be a live variety and `out` valid for writes.
 */
enum VarkitStatus varkit_variety_counting_big_n(const struct VarkitVariety *v,
                                                double re,
                                                double im,
                                                double r,
                                                double *out);

/**
 * # Safety
 * `v` must be null or a live variety; it is invalid afterwards.
 */
void varkit_variety_free(struct VarkitVariety *v);

/**
 * Values in table order: `w_{1,0}, ..., w_{1,m_1-1}, w_{2,0}, ...`, so `len`
 * must equal the total multiplicity.
 *
 * # Safety
 * `v` must be a live variety, the arrays must hold `len` elements and `out`
 * must be valid for writes.
 */
enum VarkitStatus varkit_values_new(const struct VarkitVariety *v,
                                    const double *re,
                                    const double *im,
                                    size_t len,
                                    uint32_t bits,
                                    struct VarkitValues **out);

/**
 * `W_0`: 1 in the highest derivative slot of the first point, 0 elsewhere.
 *
 * # Safety
 * `v` must be a live variety and `out` valid for writes.
 */
enum VarkitStatus varkit_values_w0(const struct VarkitVariety *v,
                                   uint32_t bits,
                                   struct VarkitValues **out);

/**
 * # Safety
 * `w` must be null or a live value sequence; it is invalid afterwards.
 */
void varkit_values_free(struct VarkitValues *w);

/**
 * Newton coefficients of the interpolant of `w` on the first `q` points.
 *
 * # Safety
 * `v` and `w` must be live handles and `out` valid for writes.
 */
enum VarkitStatus varkit_table_compute(const struct VarkitVariety *v,
                                       const struct VarkitValues *w,
                                       size_t q,
                                       uint32_t bits,
                                       enum VarkitMethod method,
                                       struct VarkitTable **out);

/**
 * Number of point rows in the table; 0 for a null handle.
 *
 * # Safety
 * `t` must be null or a live table.
 */
size_t varkit_table_len(const struct VarkitTable *t);

/**
 * `phi_{j,l}` (0-based `j`) rounded to double.
 *
 * # Safety
 * `t` must be a live table and the out-pointers valid for writes.
 */
enum VarkitStatus varkit_table_get(const struct VarkitTable *t,
                                   size_t j,
                                   uint32_t l,
                                   double *re,
                                   double *im);

/**
 * Estimated number of bits lost to cancellation in the worst entry.
 *
 * # Safety
 * `t` must be a live table and `out` valid for writes.
 */
enum VarkitStatus varkit_table_lost_bits(const struct VarkitTable *t, double *out);

/**
 * `P_q^{(l)}(z)/l!` for the Newton interpolant on the first `q` points.
 *
 * # Safety
 * `v` and `t` must be live handles and the out-pointers valid for writes.
 */
enum VarkitStatus varkit_newton_eval(const struct VarkitVariety *v,
                                     const struct VarkitTable *t,
                                     size_t q,
                                     double re,
                                     double im,
                                     uint32_t l,
                                     double *out_re,
                                     double *out_im);

/**
 * # Safety
 * `t` must be null or a live table; it is invalid afterwards.
 */
void varkit_table_free(struct VarkitTable *t);

/**
 * `N(0, 2^n) <= A p(2^n) + B` over octaves `start..=end`.
 *
 * # Safety
 * `v` and `w` must be live handles and `out` valid for writes.
 */
enum VarkitStatus varkit_check_condition_1(const struct VarkitVariety *v,
                                           const struct VarkitWeight *w,
                                           uint32_t start,
                                           uint32_t end,
                                           struct VarkitFit **out);

/**
 * `N(z_j, |z_j|) <= A p(z_j) + B` over the usable points.
 *
 * # Safety
 * `v` and `w` must be live handles and `out` valid for writes.
 */
enum VarkitStatus varkit_check_condition_2(const struct VarkitVariety *v,
                                           const struct VarkitWeight *w,
                                           struct VarkitFit **out);

/**
 * Growth of `ln sum_l |w_{j,l}|` against `p(z_j)`.
 *
 * # Safety
 * All handles must be live and `out` valid for writes.
 */
enum VarkitStatus varkit_membership_values(const struct VarkitVariety *v,
                                           const struct VarkitValues *values,
                                           const struct VarkitWeight *w,
                                           struct VarkitFit **out);

/**
 * Growth of the octave norms of a divided-difference table against
 * `p(2^n)` over octaves `start..=end`.
 *
 * # Safety
 * All handles must be live and `out` valid for writes.
 */
enum VarkitStatus varkit_membership_table(const struct VarkitTable *t,
                                          const struct VarkitVariety *v,
                                          const struct VarkitWeight *w,
                                          uint32_t start,
                                          uint32_t end,
                                          struct VarkitFit **out);

/**
 * # Safety
 * `f` must be a live fit and `out` valid for writes.
 */
enum VarkitStatus varkit_fit_verdict(const struct VarkitFit *f, enum VarkitVerdict *out);

/**
 * Fitted slope `B` and `ln A` of `y <= B x + ln A`.
 *
 * # Safety
 * `f` must be a live fit and the out-pointers valid for writes.
 */
enum VarkitStatus varkit_fit_line(const struct VarkitFit *f, double *slope, double *ln_intercept);

/**
 * `y/x` at the last octave, or NaN when the series is empty.
 *
 * # Safety
 * `f` must be a live fit and `out` valid for writes.
 */
enum VarkitStatus varkit_fit_final_ratio(const struct VarkitFit *f, double *out);

/**
 * Length of the `(octave, x, y)` series behind the verdict; 0 for a null
 * handle.
 *
 * # Safety
 * `f` must be null or a live fit.
 */
size_t varkit_fit_series_len(const struct VarkitFit *f);

/**
 * # Safety
 * `f` must be a live fit and the out-pointers valid for writes.
 */
enum VarkitStatus varkit_fit_series_get(const struct VarkitFit *f,
                                        size_t i,
                                        uint32_t *octave,
                                        double *x,
                                        double *y);

/**
 * The full fit as JSON, in the same shape as the command-line reports.
 * Release the string with `varkit_string_free`.
 *
 * # Safety
 * `f` must be a live fit and `out` valid for writes.
 */
enum VarkitStatus varkit_fit_json(const struct VarkitFit *f, char **out);

/**
 * # Safety
 * `f` must be null or a live fit; it is invalid afterwards.
 */
void varkit_fit_free(struct VarkitFit *f);

/**
 * Radial correction of the subharmonic potential at `re + i im`.
 *
 * # Safety
 * `v` must be a live variety and `out` valid for writes.
 */
enum VarkitStatus varkit_eval_correction(const struct VarkitVariety *v,
                                         double re,
                                         double im,
                                         double *out);

/**
 * Smallest power-of-two `alpha` making `V + alpha W` discretely
 * subharmonic on an `nx` by `ny` grid over the evaluation disc.
 *
 * # Safety
 * `v` must be a live variety and `alpha` valid for writes.
 */
enum VarkitStatus varkit_fit_alpha(const struct VarkitVariety *v,
                                   size_t nx,
                                   size_t ny,
                                   double *alpha);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* VARKIT_H */
