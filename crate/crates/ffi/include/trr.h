#ifndef TRR_H
#define TRR_H

#pragma once

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum TrrStatus {
  TRR_STATUS_OK = 0,
  TRR_STATUS_NULL_POINTER = 1,
  TRR_STATUS_INVALID_ARGUMENT = 2,
  // The D coefficient vanishes for the requested target.
  TRR_STATUS_ZERO_D = 3,
  // A brute-force computation exceeded the genus limit.
  TRR_STATUS_GUARD = 4,
  // An internal consistency check failed.
  TRR_STATUS_MISMATCH = 5,
  // A panic was caught at the boundary.
  TRR_STATUS_INTERNAL = 6,
} TrrStatus;

// A topological recursion relation.
typedef struct TrrRecord TrrRecord;

// Result of a D-coefficient scan.
typedef struct TrrScan TrrScan;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread; empty after a success.
// The pointer stays valid until the next call on this thread.
const char *trr_last_error(void);

// Library version as a static string.
const char *trr_version(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void trr_string_free(char *s);

// D coefficient for `(g, k, l)` as a reduced fraction string `"p/q"` or `"p"`.
//
// # Safety
// `l` must point to `l_len` values (or may be null when `l_len == 0`);
// `out` must be a valid pointer.
enum TrrStatus trr_d_value(uint32_t g, uint32_t k, const uint32_t *l, size_t l_len, char **out);

// Scans genera `g_min..=g_max` for vanishing D coefficients.
//
// # Safety
// `out` must be a valid pointer.
enum TrrStatus trr_scan_run(uint32_t g_min, uint32_t g_max, struct TrrScan **out);

// Number of vanishing cells found; 0 for null.
//
// # Safety
// `scan` must be null or a live handle.
size_t trr_scan_zero_count(const struct TrrScan *scan);

// JSON rendering of a scan.
//
// # Safety
// `scan` must be a live handle and `out` a valid pointer.
enum TrrStatus trr_scan_to_json(const struct TrrScan *scan, char **out);

// # Safety
// `scan` must be null or a live handle, not used afterwards.
void trr_scan_free(struct TrrScan *scan);

// Principal part of the TRR for `psi_1^k prod psi_j^{l_j}`. `l` is sorted
// ascending internally.
//
// # Safety
// `l` must point to `l_len` values (or may be null when `l_len == 0`);
// `out` must be a valid pointer.
enum TrrStatus trr_principal_part(uint32_t g,
                                  uint32_t k,
                                  const uint32_t *l,
                                  size_t l_len,
                                  struct TrrRecord **out);

// TRR for `psi_1^g` on one point.
//
// # Safety
// `out` must be a valid pointer.
enum TrrStatus trr_n1(uint32_t g, struct TrrRecord **out);

// JSON rendering of a record.
//
// # Safety
// `record` must be a live handle and `out` a valid pointer.
enum TrrStatus trr_record_to_json(const struct TrrRecord *record, char **out);

// # Safety
// `record` must be null or a live handle, not used afterwards.
void trr_record_free(struct TrrRecord *record);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRR_H */
