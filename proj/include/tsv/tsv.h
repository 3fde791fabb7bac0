/*
 * libtsv: C interface to the run-stack-verified Timsort library.
 *
 * Every function that can fail returns a tsv_status. On failure a
 * description is available from tsv_last_error_message() on the same
 * thread until the next failing call. Objects returned through `**out`
 * parameters are owned by the caller and released with the matching
 * *_free function; *_free accepts NULL.
 */
#ifndef TSV_TSV_H
#define TSV_TSV_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(TSV_BUILDING_LIBRARY)
#    define TSV_API __declspec(dllexport)
#  else
#    define TSV_API __declspec(dllimport)
#  endif
#else
#  define TSV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tsv_status {
  TSV_OK = 0,
  TSV_ERR_INVALID_ARGUMENT = 1,
  TSV_ERR_OUT_OF_RANGE = 2,
  TSV_ERR_INVARIANT = 3,           /* a runtime contract check failed */
  TSV_ERR_STACK_OVERFLOW = 4,      /* a run was pushed onto a full stack */
  TSV_ERR_ARITHMETIC_OVERFLOW = 5, /* result does not fit in 64 bits */
  TSV_ERR_NO_MEMORY = 6,
  TSV_ERR_INTERNAL = 7
} tsv_status;

TSV_API const char* tsv_status_name(tsv_status status);
TSV_API const char* tsv_last_error_message(void);

typedef enum tsv_policy {
  TSV_POLICY_FIXED = 0,
  TSV_POLICY_LEGACY = 1
} tsv_policy;

TSV_API tsv_status tsv_policy_parse(const char* name, tsv_policy* out);

/* ---- Sorting ---------------------------------------------------------- */

#define TSV_SORT_CHECK_INVARIANTS 0x1u

typedef struct tsv_sort_stats {
  uint64_t stack_capacity;
  uint64_t max_stack_depth;
  uint64_t comparisons;
  uint64_t merges;
  uint64_t contract_checks;
} tsv_sort_stats;

/* Stable ascending sort of `keys` in place. `stats` may be NULL. With
 * TSV_SORT_CHECK_INVARIANTS every stack-procedure contract is checked and a
 * failure returns TSV_ERR_INVARIANT. */
TSV_API tsv_status tsv_sort_i64(int64_t* keys, size_t n, unsigned flags,
                                tsv_sort_stats* stats);

/* Same keys through the independent reference merge sort. */
TSV_API tsv_status tsv_reference_sort_i64(int64_t* keys, size_t n,
                                          uint64_t* comparisons);

/* ---- Run-length lists --------------------------------------------------- */

typedef struct tsv_lengths tsv_lengths;

TSV_API size_t tsv_lengths_size(const tsv_lengths* list);
TSV_API const uint64_t* tsv_lengths_data(const tsv_lengths* list);
TSV_API void tsv_lengths_free(tsv_lengths* list);

/* Comma-separated decimal lengths on one line, e.g. "52,34,17,16". */
TSV_API tsv_status tsv_lengths_parse(const char* text, tsv_lengths** out);
/* Writes the canonical text (NUL-terminated) into buf when it fits;
 * *needed receives the length excluding the terminator. */
TSV_API tsv_status tsv_lengths_format(const uint64_t* lengths, size_t count,
                                      char* buf, size_t cap, size_t* needed);

/* ---- Bounds ------------------------------------------------------------- */

TSV_API tsv_status tsv_fib(uint64_t n, uint64_t* out);
TSV_API tsv_status tsv_fib2(uint64_t n, uint64_t* out);
TSV_API tsv_status tsv_safe_bound(uint64_t depth, uint64_t min_run,
                                  uint64_t* out);
TSV_API uint64_t tsv_required_stack_capacity(uint64_t n);
TSV_API tsv_status tsv_worst_case_run_lengths(uint64_t depth, uint64_t min_run,
                                              tsv_lengths** out);

/* ---- Generators --------------------------------------------------------- */

typedef enum tsv_gen_kind {
  TSV_GEN_UNIFORM_RANDOM = 0,
  TSV_GEN_RUN_STRUCTURED = 1,
  TSV_GEN_ASCENDING = 2,
  TSV_GEN_DESCENDING = 3,
  TSV_GEN_CONSTANT = 4,
  TSV_GEN_WORST_CASE = 5
} tsv_gen_kind;

typedef struct tsv_gen_spec {
  tsv_gen_kind kind;
  uint64_t n;
  uint64_t seed;
  uint64_t min_run;  /* run_structured / worst_case; 0 means 16 */
  uint64_t alphabet; /* uniform_random; 0 means full 64-bit range */
  uint64_t depth;    /* worst_case; nonzero ignores n */
} tsv_gen_spec;

typedef struct tsv_keys tsv_keys;

TSV_API tsv_status tsv_gen_kind_parse(const char* name, tsv_gen_kind* out);
TSV_API const char* tsv_gen_kind_name(tsv_gen_kind kind);
TSV_API tsv_status tsv_generate(const tsv_gen_spec* spec, tsv_keys** out);
/* Keys whose natural runs are exactly `lengths`. */
TSV_API tsv_status tsv_sequence_to_keys(const uint64_t* lengths, size_t count,
                                        uint64_t seed, tsv_keys** out);
TSV_API size_t tsv_keys_size(const tsv_keys* keys);
TSV_API const int64_t* tsv_keys_data(const tsv_keys* keys);
TSV_API void tsv_keys_free(tsv_keys* keys);

/* ---- Run-stack simulator ------------------------------------------------ */

typedef struct tsv_sim_trace tsv_sim_trace;

/* capacity 0 sizes the stack for the sum of the lengths. */
TSV_API tsv_status tsv_sim_replay(const uint64_t* lengths, size_t count,
                                  uint64_t min_run, tsv_policy policy,
                                  uint64_t capacity, tsv_sim_trace** out);
TSV_API uint64_t tsv_sim_trace_max_depth(const tsv_sim_trace* trace);
TSV_API size_t tsv_sim_trace_violation_count(const tsv_sim_trace* trace);
/* Pointers stay valid until the trace is freed. */
TSV_API tsv_status tsv_sim_trace_violation(const tsv_sim_trace* trace,
                                           size_t index, uint64_t* step,
                                           const char** clause,
                                           const char** detail);
TSV_API size_t tsv_sim_trace_final_size(const tsv_sim_trace* trace);
TSV_API const uint64_t* tsv_sim_trace_final_stack(const tsv_sim_trace* trace);
TSV_API void tsv_sim_trace_free(tsv_sim_trace* trace);

/* *found is NULL when no breaking sequence was found. `nodes` and
 * `exhausted` may be NULL. */
TSV_API tsv_status tsv_sim_search(tsv_policy policy, uint64_t max_runs,
                                  uint64_t min_run, uint64_t budget,
                                  tsv_lengths** found, uint64_t* nodes,
                                  int* exhausted);

/* ---- Acceptance suite --------------------------------------------------- */

typedef void (*tsv_criterion_fn)(void* user, int id, const char* name,
                                 int passed, int informational,
                                 const char* detail, double seconds);

/* Runs every acceptance criterion, calling `fn` (may be NULL) per result.
 * `sort_policy` other than FIXED is a deliberate mutation. */
TSV_API tsv_status tsv_verify(int full, tsv_policy sort_policy,
                              tsv_criterion_fn fn, void* user,
                              int* all_passed);

#ifdef __cplusplus
}
#endif

#endif /* TSV_TSV_H */
