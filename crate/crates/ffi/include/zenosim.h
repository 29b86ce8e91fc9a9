#ifndef ZENOSIM_H
#define ZENOSIM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stdint.h>

typedef enum ZsRunOutcome {
  ZS_RUN_OUTCOME_ACCEPT = 0,
  ZS_RUN_OUTCOME_STUCK = 1,
  ZS_RUN_OUTCOME_EXHAUSTED = 2,
} ZsRunOutcome;

typedef enum ZsStatus {
  ZS_STATUS_OK = 0,
  ZS_STATUS_NULL_POINTER = 1,
  ZS_STATUS_INVALID_UTF8 = 2,
  ZS_STATUS_PARSE_ERROR = 3,
  ZS_STATUS_INVALID_ARGUMENT = 4,
  /**
   * The fuel ran out before a result was reached.
   */
  ZS_STATUS_EXHAUSTED = 5,
  ZS_STATUS_PANIC = 6,
} ZsStatus;

/**
 * Opaque handle to a parsed machine and its optional input.
 */
typedef struct ZsMachine ZsMachine;

typedef struct ZsRunResult {
  enum ZsRunOutcome outcome;
  uint64_t steps;
  int64_t head1;
  int64_t head2;
} ZsRunResult;

/**
 * Message for the last failed call on this thread, or NULL. Valid until the
 * next failing call on the same thread.
 */
const char *zs_last_error(void);

/**
 * Parses a `.tm` document. On success `*out` receives a new handle.
 *
 * # Safety
 * `src` must be a NUL-terminated string and `out` a valid pointer.
 */
enum ZsStatus zs_machine_parse(const char *src, struct ZsMachine **out);

/**
 * Releases a handle. NULL is ignored.
 *
 * # Safety
 * `m` must come from [`zs_machine_parse`] and not have been freed.
 */
void zs_machine_free(struct ZsMachine *m);

/**
 * Canonical text of the machine and its input.
 *
 * # Safety
 * `m` must be a live handle and `out` a valid pointer.
 */
enum ZsStatus zs_machine_serialize(const struct ZsMachine *m, char **out);

/**
 * Runs the machine on its `tape1:` input for at most `fuel` steps.
 *
 * # Safety
 * `m` must be a live handle and `out` a valid pointer.
 */
enum ZsStatus zs_run(const struct ZsMachine *m, uint64_t fuel, struct ZsRunResult *out);

/**
 * Zeno halting check with a one-second first step. `*json_out` receives the
 * verdict object. Without the limit stage a non-halting run returns
 * `ZS_STATUS_EXHAUSTED` and leaves `*json_out` untouched.
 *
 * # Safety
 * `m` must be a live handle and `json_out` a valid pointer.
 */
enum ZsStatus zs_zeno_check(const struct ZsMachine *m,
                            uint64_t fuel,
                            bool limit_stage,
                            char **json_out);

/**
 * Counter after `n` halvings, or at the limit when `limit` is set (then `n` is ignored).
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum ZsStatus zs_counter_render(uint64_t n, bool limit, char **out);

/**
 * Observer time after `n` steps when the first step takes `num/den` seconds,
 * as an exact fraction.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum ZsStatus zs_wall_time(uint64_t n, int64_t num, int64_t den, char **out);

/**
 * The two-row contradiction table for the diagonal program, as JSON.
 *
 * # Safety
 * `json_out` must be a valid pointer.
 */
enum ZsStatus zs_paradox_report(uint64_t fuel, uint64_t w, char **json_out);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void zs_string_free(char *s);

#endif  /* ZENOSIM_H */
