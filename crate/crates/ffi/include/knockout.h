#ifndef KNOCKOUT_H
#define KNOCKOUT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum KnockoutStatus {
  KNOCKOUT_STATUS_OK = 0,
  KNOCKOUT_STATUS_INVALID_PARAMS = 1,
  KNOCKOUT_STATUS_INVALID_PLAYER_COUNT = 2,
  KNOCKOUT_STATUS_NULL_POINTER = 3,
  KNOCKOUT_STATUS_BUFFER_TOO_SMALL = 4,
  KNOCKOUT_STATUS_NON_ABSORBING_CHAIN = 5,
  KNOCKOUT_STATUS_STEP_CAP_EXCEEDED = 6,
  KNOCKOUT_STATUS_INVALID_ARGUMENT = 7,
  KNOCKOUT_STATUS_INTERNAL = 8,
} KnockoutStatus;

typedef enum KnockoutMode {
  KNOCKOUT_MODE_CORRECTED = 0,
  KNOCKOUT_MODE_PAPER_FAITHFUL = 1,
} KnockoutMode;

/**
 * Opaque round chain for a fixed `(n, p, q, mode)`.
 */
typedef struct KnockoutRound KnockoutRound;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static, NUL-terminated description of a status code.
 */
const char *knockout_status_message(enum KnockoutStatus status);

/**
 * Builds the round chain for `n` players. On success `*out` owns a new
 * handle.
 */
enum KnockoutStatus knockout_round_new(size_t n,
                                       double p,
                                       double q,
                                       enum KnockoutMode mode,
                                       struct KnockoutRound **out);

/**
 * Releases a handle. Null is a no-op.
 */
void knockout_round_free(struct KnockoutRound *round);

enum KnockoutStatus knockout_round_players(const struct KnockoutRound *round, size_t *out);

/**
 * Probability that each round position is eliminated, written to `out[0..n]`.
 */
enum KnockoutStatus knockout_round_elimination(const struct KnockoutRound *round,
                                               double *out,
                                               size_t len);

enum KnockoutStatus knockout_round_expected_steps(const struct KnockoutRound *round, double *out);

/**
 * Win probability of each starting position, written to `out[0..n]`.
 */
enum KnockoutStatus knockout_win_distribution(size_t n,
                                              double p,
                                              double q,
                                              enum KnockoutMode mode,
                                              double *out,
                                              size_t len);

enum KnockoutStatus knockout_expected_steps_game(size_t n, double p, double q, double *out);

enum KnockoutStatus knockout_two_player_win(double p, double *out);

enum KnockoutStatus knockout_three_player_elimination(double p, double q, double *out);

enum KnockoutStatus knockout_p1_early_elimination(double p, double q, double *out);

/**
 * Plays `games` simulated games. Win counts by starting position go to
 * `win_counts[0..n]` and the mean game length to `*mean_steps`. The
 * result does not depend on `jobs`.
 */
enum KnockoutStatus knockout_simulate(size_t n,
                                      double p,
                                      double q,
                                      uint64_t games,
                                      uint64_t seed,
                                      size_t jobs,
                                      uint64_t step_cap,
                                      uint64_t *win_counts,
                                      size_t len,
                                      double *mean_steps);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KNOCKOUT_H */
