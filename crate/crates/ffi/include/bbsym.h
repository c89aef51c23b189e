#ifndef BBSYM_H
#define BBSYM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Zero is success.
 */
typedef enum BbStatus {
  BB_STATUS_OK = 0,
  BB_STATUS_NULL_POINTER = 1,
  BB_STATUS_INVALID_UTF8 = 2,
  BB_STATUS_INVALID_ARGUMENT = 3,
  BB_STATUS_PARSE = 4,
  BB_STATUS_DIMENSION_MISMATCH = 5,
  BB_STATUS_CYCLE_NOT_CLOSED = 6,
  BB_STATUS_DIMENSION_CAP = 7,
  BB_STATUS_NON_ABELIAN = 8,
  BB_STATUS_NUMERIC = 9,
  BB_STATUS_PANIC = 10,
} BbStatus;

/**
 * Opaque system-bath Hamiltonian.
 */
typedef struct BbHamiltonian BbHamiltonian;

/**
 * Opaque pulse sequence.
 */
typedef struct BbSequence BbSequence;

/**
 * Error-group summary. Log2 fields are -1 when the group is not Abelian.
 */
typedef struct BbGroupInfo {
  bool abelian;
  size_t rank;
  int64_t order_log2;
  int64_t dfs_dim_log2;
} BbGroupInfo;

/**
 * Log-log fit of the effective-Hamiltonian error against tau.
 */
typedef struct BbSlope {
  /**
   * True when every point sat at the numerical floor; `slope` is then NaN.
   */
  bool exact;
  double slope;
} BbSlope;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer
 * stays valid until the next `bb_` call on the same thread.
 */
const char *bb_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *bb_version(void);

/**
 * Frees a string returned by this library.
 *
 * # Safety
 * `s` must come from a `bb_` function returning `char *` and not have been freed.
 */
void bb_string_free(char *s);

/**
 * Builds a named Hamiltonian: `linear`, `bilinear`, `hnn`, `zz_chain` or
 * `pairwise_isotropic`.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum BbStatus bb_hamiltonian_build(const char *name, size_t n, struct BbHamiltonian **out);

/**
 * Parses a Hamiltonian document.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum BbStatus bb_hamiltonian_from_json(const char *json, struct BbHamiltonian **out);

/**
 * Serializes a Hamiltonian; NULL if `h` is NULL.
 *
 * # Safety
 * `h` must be a live handle or NULL.
 */
char *bb_hamiltonian_to_json(const struct BbHamiltonian *h);

/**
 * Number of canonical terms; 0 for NULL.
 *
 * # Safety
 * `h` must be a live handle or NULL.
 */
size_t bb_hamiltonian_num_terms(const struct BbHamiltonian *h);

/**
 * # Safety
 * `h` must be a live handle or NULL.
 */
size_t bb_hamiltonian_num_qubits(const struct BbHamiltonian *h);

/**
 * # Safety
 * `h` must come from this library and not have been freed.
 */
void bb_hamiltonian_free(struct BbHamiltonian *h);

/**
 * Builds a built-in sequence by key (`mqe8`, `collective6`, ...) on `n`
 * qubits. `collective14` requires `n == 3`.
 *
 * # Safety
 * `key` must be a NUL-terminated string; `out` must be writable.
 */
enum BbStatus bb_sequence_builtin(const char *key, size_t n, struct BbSequence **out);

/**
 * Parses a sequence document. `n == 0` takes the width from the document.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum BbStatus bb_sequence_from_json(const char *json, size_t n, struct BbSequence **out);

/**
 * # Safety
 * `s` must be a live handle or NULL.
 */
char *bb_sequence_to_json(const struct BbSequence *s);

/**
 * Bracket notation, e.g. `[τ, X, τ, X]`.
 *
 * # Safety
 * `s` must be a live handle or NULL.
 */
char *bb_sequence_notation(const struct BbSequence *s);

/**
 * # Safety
 * `s` must be a live handle or NULL.
 */
size_t bb_sequence_pulse_count(const struct BbSequence *s);

/**
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void bb_sequence_free(struct BbSequence *s);

/**
 * Average Hamiltonian of `h` under one cycle of `seq`, normalized by the
 * total free-evolution weight.
 *
 * # Safety
 * `seq` and `h` must be live handles; `out` must be writable.
 */
enum BbStatus bb_average_hamiltonian(const struct BbSequence *seq,
                                     const struct BbHamiltonian *h,
                                     struct BbHamiltonian **out);

/**
 * Error group spanned by the system operators of `h`.
 *
 * # Safety
 * `h` must be a live handle; `info` must be writable.
 */
enum BbStatus bb_group_analyze(const struct BbHamiltonian *h, struct BbGroupInfo *info);

/**
 * Dense check: fits the effective-Hamiltonian error over the default tau
 * grid with a random bath of dimension `bath_dim`.
 *
 * # Safety
 * `seq` and `h` must be live handles; `out` must be writable.
 */
enum BbStatus bb_effective_error_slope(const struct BbSequence *seq,
                                       const struct BbHamiltonian *h,
                                       size_t bath_dim,
                                       uint64_t seed,
                                       struct BbSlope *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BBSYM_H */
