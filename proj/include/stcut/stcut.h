#ifndef STCUT_STCUT_H
#define STCUT_STCUT_H

#include <stddef.h>
#include <stdint.h>

#if defined(STCUT_BUILDING)
#define STCUT_API __attribute__((visibility("default")))
#else
#define STCUT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct stcut_instance stcut_instance;
typedef struct stcut_result stcut_result;

typedef enum stcut_status {
  STCUT_OK = 0,
  STCUT_E_INVALID_ARGUMENT,
  STCUT_E_ZERO_CAPACITY,
  STCUT_E_ZERO_DEMAND,
  STCUT_E_TOO_LARGE,
  STCUT_E_DISCONNECTED,
  STCUT_E_EMPTY_SET,
  STCUT_E_NOT_ST_SEPARATING,
  STCUT_E_VIOLATED_PROPERTY,
  STCUT_E_DEGENERATE_MAP,
  STCUT_E_ITERATION_LIMIT,
  STCUT_E_INFEASIBLE,
  STCUT_E_REQUIRES_PRODUCT_DEMAND,
  STCUT_E_NUMERICAL_FAILURE,
  STCUT_E_LEMMA_VIOLATION,
  STCUT_E_COLLAPSED_TERMINALS,
  STCUT_E_AMPLIFICATION_EXHAUSTED,
  STCUT_E_ISOLATED_VERTEX,
  STCUT_E_PARSE,
  STCUT_E_MISSING_TERMINALS,
  STCUT_E_BAD_PROBABILITY,
  STCUT_E_SIZE_CEILING,
  STCUT_E_IO,
  STCUT_E_INTERNAL
} stcut_status;

typedef struct stcut_error {
  stcut_status status;
  int line; /* input line for parse errors, else 0 */
  char message[512];
} stcut_error;

/* Every function taking an stcut_error* accepts NULL. */

STCUT_API const char* stcut_status_name(stcut_status status);
/* 0 ok, 3 for input errors (parse, terminals, probabilities, unreadable file), 2 otherwise. */
STCUT_API int stcut_exit_code(stcut_status status);

STCUT_API stcut_status stcut_instance_parse(const char* text, stcut_instance** out, stcut_error* err);
STCUT_API stcut_status stcut_instance_read(const char* path, stcut_instance** out, stcut_error* err);
STCUT_API void stcut_instance_free(stcut_instance* inst);
STCUT_API int stcut_instance_num_vertices(const stcut_instance* inst);
STCUT_API int stcut_instance_source(const stcut_instance* inst);
STCUT_API int stcut_instance_sink(const stcut_instance* inst);
STCUT_API stcut_status stcut_instance_write(const stcut_instance* inst, const char* path, stcut_error* err);
/* Returns a malloc'd string; release with stcut_string_free. */
STCUT_API char* stcut_instance_to_text(const stcut_instance* inst);
STCUT_API void stcut_string_free(char* text);

typedef enum stcut_model { STCUT_MODEL_GNP = 0, STCUT_MODEL_GRID = 1 } stcut_model;

typedef struct stcut_gen_options {
  int n;
  stcut_model model;
  double p;   /* gnp edge probability */
  int width;  /* grid row length */
  uint64_t seed;
} stcut_gen_options;

STCUT_API void stcut_gen_options_init(stcut_gen_options* options);
STCUT_API stcut_status stcut_generate(const stcut_gen_options* options, stcut_instance** out, stcut_error* err);

typedef struct stcut_solve_options {
  const char* method; /* lp, sdp, dnc, exact, spectral */
  uint64_t seed;
  double tolerance;   /* <= 0: STCUT_TOL if set, else the solver default */
  int timing;         /* nonzero adds wall_ms */
  int oracle;         /* nonzero attaches OPT_st for n <= 12 */
} stcut_solve_options;

STCUT_API void stcut_solve_options_init(stcut_solve_options* options);
STCUT_API stcut_status stcut_solve(const stcut_instance* inst, const stcut_solve_options* options,
                                   stcut_result** out, stcut_error* err);
STCUT_API void stcut_result_free(stcut_result* result);
STCUT_API size_t stcut_result_cut_size(const stcut_result* result);
STCUT_API const int* stcut_result_cut(const stcut_result* result);
/* Sparsity under unit total capacity and demand; INFINITY when no demand is cut. */
STCUT_API double stcut_result_sparsity(const stcut_result* result);
STCUT_API double stcut_result_size_sparsity(const stcut_result* result);
STCUT_API int stcut_result_st_separating(const stcut_result* result);
/* Owned by the result; valid until stcut_result_free. */
STCUT_API const char* stcut_result_json(const stcut_result* result);

typedef struct stcut_bench_options {
  int n_min;
  int n_max;
  int trials;
  const char* methods; /* comma separated */
  uint64_t seed;
  stcut_model model;
  double p;
  int width;
  double tolerance;
  int timing;
} stcut_bench_options;

STCUT_API void stcut_bench_options_init(stcut_bench_options* options);
/* Writes the CSV to csv_path and a JSON summary to summary_path (may be NULL). */
STCUT_API stcut_status stcut_bench(const stcut_bench_options* options, const char* csv_path,
                                   const char* summary_path, stcut_error* err);

#ifdef __cplusplus
}
#endif

#endif
