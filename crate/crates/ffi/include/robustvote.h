#ifndef ROBUSTVOTE_H
#define ROBUSTVOTE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Outcome of a call. Zero means success.
typedef enum RvStatus {
  RV_STATUS_OK = 0,
  // A required pointer argument was null.
  RV_STATUS_NULL_POINTER = 1,
  // A string argument was not valid UTF-8.
  RV_STATUS_INVALID_UTF8 = 2,
  // Input text could not be parsed as JSON, a rule table or a rational.
  RV_STATUS_PARSE = 3,
  // Objects disagree in the number of individuals.
  RV_STATUS_DIMENSION_MISMATCH = 4,
  // Input parsed but violates a precondition.
  RV_STATUS_INVALID = 5,
  // A consistency check failed inside the library. Always a bug.
  RV_STATUS_INTERNAL = 6,
} RvStatus;

// A probability distribution over decision profiles.
typedef struct RvDistribution RvDistribution;

// A set of distributions given by its extreme points.
typedef struct RvDistributionSet RvDistributionSet;

// A deterministic voting rule.
typedef struct RvRule RvRule;

// Library version, a static string.
const char *rv_version(void);

// Message for the last failed call on this thread; empty after a success.
// Valid until the next call on the same thread.
const char *rv_last_error_message(void);

// Releases a string returned by the library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void rv_string_free(char *s);

// Parses a truth table of `2^n` `+`/`-` characters, profiles in ascending
// bit order with individual 1 as the lowest bit.
//
// # Safety
// `table` must be a NUL-terminated string; `out` must be writable.
enum RvStatus rv_rule_from_table(const char *table, struct RvRule **out);

// Parses `{"n": .., "table": ".."}`.
//
// # Safety
// `json_text` must be a NUL-terminated string; `out` must be writable.
enum RvStatus rv_rule_from_json(const char *json_text, struct RvRule **out);

// # Safety
// `rule` must come from this library and not have been freed; null is ignored.
void rv_rule_free(struct RvRule *rule);

// # Safety
// Pointers must be valid.
enum RvStatus rv_rule_num_voters(const struct RvRule *rule, uintptr_t *out);

// # Safety
// Pointers must be valid.
enum RvStatus rv_rule_is_anonymous(const struct RvRule *rule, bool *out);

// Writes the dictator's index (1-based), or 0 when there is none.
//
// # Safety
// Pointers must be valid.
enum RvStatus rv_rule_dictator(const struct RvRule *rule, uintptr_t *out);

// Robustness against all degenerate distributions.
//
// # Safety
// Pointers must be valid.
enum RvStatus rv_rule_is_robust(const struct RvRule *rule, bool weak, bool *out);

// Every structural predicate with certificates, as a JSON object.
//
// # Safety
// Pointers must be valid; release `*out` with `rv_string_free`.
enum RvStatus rv_rule_classify_json(const struct RvRule *rule, char **out);

// Parses `{"n": .., "atoms": [{"profile": .., "prob": ..}, ..]}`.
//
// # Safety
// `json_text` must be a NUL-terminated string; `out` must be writable.
enum RvStatus rv_dist_from_json(const char *json_text, struct RvDistribution **out);

// # Safety
// `out` must be writable.
enum RvStatus rv_dist_uniform(uintptr_t n, struct RvDistribution **out);

// # Safety
// `dist` must come from this library and not have been freed; null is ignored.
void rv_dist_free(struct RvDistribution *dist);

// Parses `{"n": .., "extreme_points": [<distribution>, ..]}`.
//
// # Safety
// `json_text` must be a NUL-terminated string; `out` must be writable.
enum RvStatus rv_pset_from_json(const char *json_text, struct RvDistributionSet **out);

// The `2^n` degenerate distributions.
//
// # Safety
// `out` must be writable.
enum RvStatus rv_pset_degenerate(uintptr_t n, struct RvDistributionSet **out);

// # Safety
// Pointers must be valid.
enum RvStatus rv_pset_len(const struct RvDistributionSet *pset, uintptr_t *out);

// # Safety
// `pset` must come from this library and not have been freed; null is ignored.
void rv_pset_free(struct RvDistributionSet *pset);

// Decides robustness of `rule` against `pset` (all degenerate
// distributions when null). Writes the verdict to `robust` and, when
// `certificate` is not null, the certificate as JSON.
//
// # Safety
// Pointers must be valid; release `*certificate` with `rv_string_free`.
enum RvStatus rv_certify(const struct RvRule *rule,
                         const struct RvDistributionSet *pset,
                         bool weak,
                         bool *robust,
                         char **certificate);

// Responsiveness of each individual as a JSON array of `"num/den"` strings.
//
// # Safety
// Pointers must be valid; release `*out` with `rv_string_free`.
enum RvStatus rv_responsiveness_json(const struct RvRule *rule,
                                     const struct RvDistribution *dist,
                                     char **out);

// Re-checks a report produced by the command line tool. `valid` is false
// when any check fails; `failures`, when not null, receives a JSON array
// describing them. Malformed reports are an error, not an invalid verdict.
//
// # Safety
// `report_json` must be a NUL-terminated string; release `*failures` with
// `rv_string_free`.
enum RvStatus rv_verify_report(const char *report_json, bool *valid, char **failures);

#endif  /* ROBUSTVOTE_H */
