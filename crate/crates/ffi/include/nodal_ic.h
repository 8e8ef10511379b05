#ifndef NODAL_IC_H
#define NODAL_IC_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes. Values 1 to 4 mirror the library error kinds.
typedef enum NicStatus {
  NIC_STATUS_OK = 0,
  // Malformed JSON or an unparsable number.
  NIC_STATUS_PARSE_ERROR = 1,
  // Inconsistent vector or matrix sizes.
  NIC_STATUS_DIMENSION_ERROR = 2,
  // Input outside the supported range.
  NIC_STATUS_INPUT_ERROR = 3,
  // Input violates a mathematical precondition.
  NIC_STATUS_PRECONDITION_ERROR = 4,
  NIC_STATUS_NULL_POINTER = 5,
  // A string argument is not valid UTF-8.
  NIC_STATUS_INVALID_UTF8 = 6,
  // Internal failure; the library caught a panic.
  NIC_STATUS_PANIC = 7,
} NicStatus;

// Opaque handle owning a JSON report.
typedef struct NicReport NicReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Stalk cohomology of the IC complex for a monodromy document. `sign` is
// the Picard-Lefschetz sign, `+1` or `-1`.
//
// # Safety
// `monodromy_json` must be a NUL-terminated string and `out` a valid
// pointer to writable storage for one handle.
enum NicStatus nic_ic_stalk(const char *monodromy_json, int32_t sign, struct NicReport **out);

// Conditions imposed by a point-set document on forms of degree `degree`.
//
// # Safety
// Same contract as [`nic_ic_stalk`].
enum NicStatus nic_conditions(const char *points_json, uint32_t degree, struct NicReport **out);

// Vanishing chase of `h^1` of the resolved sheaf twisted by `twist`.
//
// # Safety
// Same contract as [`nic_ic_stalk`].
enum NicStatus nic_chase(const char *resolution_json, int64_t twist, struct NicReport **out);

// Koszul resolution of the complete intersection of forms with the given
// `count` degrees on `P^n`, as a resolution document.
//
// # Safety
// `degrees` must point to `count` readable values; `out` as in
// [`nic_ic_stalk`].
enum NicStatus nic_koszul(uint64_t n,
                          const uint64_t *degrees,
                          uintptr_t count,
                          struct NicReport **out);

// Eagon-Northcott resolution for `quadrics` quadrics on `P^n`.
//
// # Safety
// `out` as in [`nic_ic_stalk`].
enum NicStatus nic_eagon_northcott(uint64_t n, uint64_t quadrics, struct NicReport **out);

// The `(k-1)^n` grid node set in `P^n`, as a point-set document.
//
// # Safety
// `out` as in [`nic_ic_stalk`].
enum NicStatus nic_grid(uint32_t n, uint32_t k, struct NicReport **out);

// `h^q(P^n, O(a))`, written to `value`.
//
// # Safety
// `value` must be a valid pointer to writable storage.
enum NicStatus nic_bott_h(uint64_t n, uint64_t q, int64_t a, uint64_t *value);

// Borrowed JSON text of a report, valid until the report is freed. Null if
// `report` is null.
//
// # Safety
// `report` must be null or a live handle from this library.
const char *nic_report_json(const struct NicReport *report);

// Releases a report. Null is ignored.
//
// # Safety
// `report` must be null or a handle from this library not yet freed.
void nic_report_free(struct NicReport *report);

// Message for the most recent failure on this thread, or null. Valid until
// the next call into the library from the same thread.
const char *nic_last_error(void);

// Library version as a static NUL-terminated string.
const char *nic_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NODAL_IC_H */
