#ifndef CUBEISO_H
#define CUBEISO_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CubeisoStatus {
  CUBEISO_STATUS_OK = 0,
  CUBEISO_STATUS_NULL_POINTER = 1,
  CUBEISO_STATUS_INVALID_ARGUMENT = 2,
  CUBEISO_STATUS_PARSE_ERROR = 3,
  /**
   * Well-formed request that is too large (dimension cap, enumeration
   * limits).
   */
  CUBEISO_STATUS_CAPABILITY = 4,
  CUBEISO_STATUS_CERTIFICATE_REJECTED = 5,
  CUBEISO_STATUS_INTERNAL = 6,
} CubeisoStatus;

/**
 * Opaque induction certificate.
 */
typedef struct CubeisoCertificate CubeisoCertificate;

/**
 * Opaque family of subsets of `[n]`.
 */
typedef struct CubeisoFamily CubeisoFamily;

/**
 * Counts describing one family.
 */
typedef struct CubeisoProfile {
  uint32_t n;
  uint64_t size;
  uint64_t internal_edges;
  uint64_t edge_boundary;
  /**
   * `2e(A) + |A ∩ Ā|`
   */
  uint64_t potential;
} CubeisoProfile;

/**
 * Message for the last failed call on this thread, or an empty string.
 * The pointer stays valid until the next call on this thread.
 */
const char *cubeiso_last_error_message(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void cubeiso_string_free(char *s);

/**
 * The empty family of `Q_n`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CubeisoStatus cubeiso_family_new(uint32_t n, struct CubeisoFamily **out);

/**
 * The family with the given vertex codes (bit `i-1` of a code marks
 * element `i`).
 *
 * # Safety
 * `codes` must point to `len` readable values (or be null when `len` is 0)
 * and `out` must be valid for writes.
 */
enum CubeisoStatus cubeiso_family_from_codes(uint32_t n,
                                             const uint32_t *codes,
                                             size_t len,
                                             struct CubeisoFamily **out);

/**
 * `I_{n,k}`: the vertices with code below `k`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CubeisoStatus cubeiso_family_initial_segment(uint32_t n,
                                                  uint64_t k,
                                                  struct CubeisoFamily **out);

/**
 * `I_{n,m/2} ∪ Ī_{n,m/2}` for even `m`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CubeisoStatus cubeiso_family_extremal(uint32_t n, uint64_t m, struct CubeisoFamily **out);

/**
 * Parses the `n=<n> hex=<digits>` form.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` valid for writes.
 */
enum CubeisoStatus cubeiso_family_parse(const char *text, struct CubeisoFamily **out);

/**
 * Writes the `n=<n> hex=<digits>` form; free it with
 * [`cubeiso_string_free`].
 *
 * # Safety
 * `family` must be a live handle and `out` valid for writes.
 */
enum CubeisoStatus cubeiso_family_serialize(const struct CubeisoFamily *family, char **out);

/**
 * # Safety
 * `family` must be null or a live handle; it is invalid afterwards.
 */
void cubeiso_family_free(struct CubeisoFamily *family);

/**
 * # Safety
 * `family` must be a live handle and `out` valid for writes.
 */
enum CubeisoStatus cubeiso_family_size(const struct CubeisoFamily *family, uint64_t *out);

/**
 * # Safety
 * `family` must be a live handle and `out` valid for writes.
 */
enum CubeisoStatus cubeiso_family_dimension(const struct CubeisoFamily *family, uint32_t *out);

/**
 * # Safety
 * `family` must be a live handle and `out` valid for writes.
 */
enum CubeisoStatus cubeiso_family_profile(const struct CubeisoFamily *family,
                                          struct CubeisoProfile *out);

/**
 * `F(k)`, the number of edges inside the first `k` vertices in binary
 * order.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CubeisoStatus cubeiso_f_value(uint64_t k, uint64_t *out);

/**
 * Smallest edge boundary of an antipodal family of even size `m` in `Q_n`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CubeisoStatus cubeiso_theorem_rhs(uint32_t n, uint64_t m, uint64_t *out);

/**
 * Traces the induction on `family`.
 *
 * # Safety
 * `family` must be a live handle and `out` valid for writes.
 */
enum CubeisoStatus cubeiso_trace(const struct CubeisoFamily *family,
                                 struct CubeisoCertificate **out);

/**
 * `Ok` when `cert` checks out against `family`, `CertificateRejected`
 * otherwise, with the failure locus in the last error message.
 *
 * # Safety
 * Both handles must be live.
 */
enum CubeisoStatus cubeiso_certificate_verify(const struct CubeisoCertificate *cert,
                                              const struct CubeisoFamily *family);

/**
 * Parses the certificate text form.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` valid for writes.
 */
enum CubeisoStatus cubeiso_certificate_parse(const char *text, struct CubeisoCertificate **out);

/**
 * Writes the certificate text form; free it with [`cubeiso_string_free`].
 *
 * # Safety
 * `cert` must be a live handle and `out` valid for writes.
 */
enum CubeisoStatus cubeiso_certificate_serialize(const struct CubeisoCertificate *cert, char **out);

/**
 * # Safety
 * `cert` must be null or a live handle; it is invalid afterwards.
 */
void cubeiso_certificate_free(struct CubeisoCertificate *cert);

#endif  /* CUBEISO_H */
