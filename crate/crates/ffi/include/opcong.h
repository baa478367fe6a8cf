#ifndef OPCONG_H
#define OPCONG_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stdint.h>

typedef enum OpcongStatus {
  OPCONG_STATUS_OK = 0,
  OPCONG_STATUS_NULL_POINTER = 1,
  OPCONG_STATUS_INVALID_UTF8 = 2,
  OPCONG_STATUS_PARSE = 3,
  OPCONG_STATUS_INVALID_ARGUMENT = 4,
  OPCONG_STATUS_TRUNCATION = 5,
  OPCONG_STATUS_RING = 6,
  OPCONG_STATUS_NOT_UNIT = 7,
  OPCONG_STATUS_CERTIFICATE = 8,
  OPCONG_STATUS_BUDGET = 9,
  OPCONG_STATUS_IO = 10,
  OPCONG_STATUS_OUT_OF_RANGE = 11,
  OPCONG_STATUS_PANIC = 12,
} OpcongStatus;

/*
 A witness certificate.
 */
typedef struct OpcongCertificate OpcongCertificate;

/*
 A truncated Laurent series.
 */
typedef struct OpcongSeries OpcongSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Crate version as a static NUL-terminated string.
 */
const char *opcong_version(void);

/*
 Message for the last failing call on this thread, or NULL. Valid until the
 next `opcong_*` call on this thread.
 */
const char *opcong_last_error(void);

/*
 # Safety
 `s` is NULL or a string returned by this library and not yet freed.
 */
void opcong_string_free(char *s);

/*
 Expand an eta quotient such as `"q^-1 * f2^1 * f1^-2"` in `ring`
 (`"exact"` or `"mod2k:K"`) through `q^(trunc-1)`.

 # Safety
 `quotient` and `ring` are NUL-terminated strings; `out` is writable.
 */
enum OpcongStatus opcong_eta_expand(const char *quotient,
                                    const char *ring,
                                    int64_t trunc,
                                    struct OpcongSeries **out);

/*
 `f_2^t / f_1^(2t)` through `q^(trunc-1)`.

 # Safety
 `ring` is a NUL-terminated string; `out` is writable.
 */
enum OpcongStatus opcong_overpartition_gf(uint32_t t,
                                          const char *ring,
                                          int64_t trunc,
                                          struct OpcongSeries **out);

/*
 `sum_n a(m n + j) q^n`.

 # Safety
 `series` is a live handle; `out` is writable.
 */
enum OpcongStatus opcong_series_extract(const struct OpcongSeries *series,
                                        uint64_t m,
                                        uint64_t j,
                                        struct OpcongSeries **out);

/*
 Product of two series over the same ring.

 # Safety
 `a` and `b` are live handles; `out` is writable.
 */
enum OpcongStatus opcong_series_mul(const struct OpcongSeries *a,
                                    const struct OpcongSeries *b,
                                    struct OpcongSeries **out);

/*
 Lowest stored exponent and the truncation: coefficients are known for
 `offset <= e < trunc`.

 # Safety
 `series` is a live handle; `offset` and `trunc` are writable.
 */
enum OpcongStatus opcong_series_bounds(const struct OpcongSeries *series,
                                       int64_t *offset,
                                       int64_t *trunc);

/*
 Coefficient of `q^e` as an `int64_t`. Fails with
 `OPCONG_STATUS_OUT_OF_RANGE` when `e` is not below the truncation or the
 value does not fit.

 # Safety
 `series` is a live handle; `out` is writable.
 */
enum OpcongStatus opcong_series_coeff_i64(const struct OpcongSeries *series,
                                          int64_t e,
                                          int64_t *out);

/*
 Coefficient of `q^e` as a decimal string.

 # Safety
 `series` is a live handle; `out` is writable.
 */
enum OpcongStatus opcong_series_coeff_str(const struct OpcongSeries *series, int64_t e, char **out);

/*
 # Safety
 `series` is NULL or a live handle, not used afterwards.
 */
void opcong_series_free(struct OpcongSeries *series);

/*
 The builtin certificate for `p̄_{-5}(8n+7) = 0 (mod 128)`.

 # Safety
 `out` is writable.
 */
enum OpcongStatus opcong_certificate_builtin(struct OpcongCertificate **out);

/*
 Parse a certificate in the text format.

 # Safety
 `source` is a NUL-terminated string; `out` is writable.
 */
enum OpcongStatus opcong_certificate_parse(const char *source, struct OpcongCertificate **out);

/*
 Serialize a certificate to the text format.

 # Safety
 `cert` is a live handle; `out` is writable.
 */
enum OpcongStatus opcong_certificate_to_text(const struct OpcongCertificate *cert, char **out);

/*
 Check the certificate identity through `q^(trunc-1)`. `two_adic_valuation`
 receives the valuation of the polynomial's gcd, or -1 when the gcd is 0.

 # Safety
 `cert` is a live handle; `matched` and `two_adic_valuation` are writable.
 */
enum OpcongStatus opcong_verify_witness(const struct OpcongCertificate *cert,
                                        int64_t trunc,
                                        bool *matched,
                                        int64_t *two_adic_valuation);

/*
 # Safety
 `cert` is NULL or a live handle, not used afterwards.
 */
void opcong_certificate_free(struct OpcongCertificate *cert);

/*
 Check `p̄_{-t}(m n + j) = 0 (mod 2^k)` for `n = 0..=n_max`.
 `counterexample_n` receives the first failing `n`, or `UINT64_MAX`.

 # Safety
 `holds` and `counterexample_n` are writable.
 */
enum OpcongStatus opcong_check_claim(uint32_t t,
                                     uint64_t m,
                                     uint64_t j,
                                     uint32_t k,
                                     uint64_t n_max,
                                     bool *holds,
                                     uint64_t *counterexample_n);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OPCONG_H */
