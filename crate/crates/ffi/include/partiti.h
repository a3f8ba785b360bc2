#ifndef PARTITI_H
#define PARTITI_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PartitiStatus {
  PARTITI_STATUS_OK = 0,
  PARTITI_STATUS_NULL_ARGUMENT = 1,
  PARTITI_STATUS_INVALID_UTF8 = 2,
  PARTITI_STATUS_PARSE_ERROR = 3,
  PARTITI_STATUS_INVALID_ARGUMENT = 4,
  PARTITI_STATUS_OUT_OF_RANGE = 5,
  PARTITI_STATUS_NO_SOLUTION = 6,
  PARTITI_STATUS_MULTIPLE_SOLUTIONS = 7,
  PARTITI_STATUS_NODE_LIMIT = 8,
  PARTITI_STATUS_MISSING_SOLUTION = 9,
  PARTITI_STATUS_RULE_VIOLATION = 10,
  PARTITI_STATUS_GENERATION_EXHAUSTED = 11,
  PARTITI_STATUS_PANIC = 99,
} PartitiStatus;

typedef enum PartitiDifficulty {
  PARTITI_DIFFICULTY_ANY = 0,
  PARTITI_DIFFICULTY_EASY = 1,
  PARTITI_DIFFICULTY_MEDIUM = 2,
  PARTITI_DIFFICULTY_HARD = 3,
} PartitiDifficulty;

typedef enum PartitiPartitionKind {
  /**
   * Unrestricted, p(n).
   */
  PARTITI_PARTITION_KIND_ALL = 0,
  /**
   * Distinct parts, q(n).
   */
  PARTITI_PARTITION_KIND_DISTINCT = 1,
  /**
   * Odd parts.
   */
  PARTITI_PARTITION_KIND_ODD = 2,
} PartitiPartitionKind;

/**
 * Opaque puzzle handle: clues plus optional solution and metadata.
 */
typedef struct PartitiPuzzle PartitiPuzzle;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a puzzle document (strict JSON) into a new handle.
 *
 * # Safety
 * `json` must be NUL-terminated; `out` must be valid for a pointer write.
 */
enum PartitiStatus partiti_puzzle_parse(const char *json, struct PartitiPuzzle **out);

/**
 * Generates a puzzle with a unique solution; deterministic in all arguments.
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum PartitiStatus partiti_puzzle_generate(uint32_t rows,
                                           uint32_t cols,
                                           uint64_t seed,
                                           enum PartitiDifficulty difficulty,
                                           struct PartitiPuzzle **out);

/**
 * Releases a handle. NULL is ignored.
 *
 * # Safety
 * `puzzle` must come from this library and not be used afterwards.
 */
void partiti_puzzle_free(struct PartitiPuzzle *puzzle);

/**
 * Number of rows, or 0 for NULL.
 *
 * # Safety
 * `puzzle` must be NULL or a live handle.
 */
uint32_t partiti_puzzle_rows(const struct PartitiPuzzle *puzzle);

/**
 * Number of columns, or 0 for NULL.
 *
 * # Safety
 * `puzzle` must be NULL or a live handle.
 */
uint32_t partiti_puzzle_cols(const struct PartitiPuzzle *puzzle);

/**
 * Clue at `(row, col)`, or 0 when out of bounds or NULL.
 *
 * # Safety
 * `puzzle` must be NULL or a live handle.
 */
uint8_t partiti_puzzle_clue(const struct PartitiPuzzle *puzzle, uint32_t row, uint32_t col);

/**
 * Whether the handle carries a solution.
 *
 * # Safety
 * `puzzle` must be NULL or a live handle.
 */
bool partiti_puzzle_has_solution(const struct PartitiPuzzle *puzzle);

/**
 * Canonical JSON. With `include_solution` false the solution is omitted.
 *
 * # Safety
 * `puzzle` must be a live handle; `out` valid for a pointer write. Free the
 * result with [`partiti_string_free`].
 */
enum PartitiStatus partiti_puzzle_to_json(const struct PartitiPuzzle *puzzle,
                                          bool include_solution,
                                          char **out);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void partiti_string_free(char *s);

/**
 * Counts solutions of the clues, stopping at `cap`. `node_limit` 0 means
 * the library default. Hitting the node limit returns
 * `PARTITI_STATUS_NODE_LIMIT` and still writes the partial count.
 *
 * # Safety
 * `puzzle` must be a live handle; `out_count` valid for a write.
 */
enum PartitiStatus partiti_puzzle_count_solutions(const struct PartitiPuzzle *puzzle,
                                                  uint32_t cap,
                                                  uint64_t node_limit,
                                                  uint32_t *out_count);

/**
 * Solves the clues and returns a new handle carrying the unique solution.
 *
 * # Safety
 * `puzzle` must be a live handle; `out` valid for a pointer write.
 */
enum PartitiStatus partiti_puzzle_solve(const struct PartitiPuzzle *puzzle,
                                        struct PartitiPuzzle **out);

/**
 * Checks the handle's solution against its clues and writes the number of
 * rule violations (0 means valid).
 *
 * # Safety
 * `puzzle` must be a live handle; `out_violations` valid for a write.
 */
enum PartitiStatus partiti_puzzle_verify(const struct PartitiPuzzle *puzzle,
                                         uint32_t *out_violations);

/**
 * Next deduction for `marks_json` (a row-major matrix of digit arrays; NULL
 * means all cells empty), as a JSON object, or the JSON literal `null` when
 * nothing more can be deduced.
 *
 * # Safety
 * `puzzle` must be a live handle; `marks_json` NULL or NUL-terminated; `out`
 * valid for a pointer write. Free the result with [`partiti_string_free`].
 */
enum PartitiStatus partiti_puzzle_hint(const struct PartitiPuzzle *puzzle,
                                       const char *marks_json,
                                       char **out);

/**
 * Partition count of `n` of the given kind.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum PartitiStatus partiti_count_partitions(uint32_t n,
                                            enum PartitiPartitionKind kind,
                                            uint64_t *out);

/**
 * Message for the last failed call on this thread, or NULL.
 */
const char *partiti_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *partiti_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PARTITI_H */
