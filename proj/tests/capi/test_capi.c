#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "stcut/stcut.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

static const char* kPath3 =
    "graph 3 0 2\ncap 0 1 1\ncap 1 2 1\ndem product\nmu 0 0.333333333\nmu 1 0.333333333\nmu 2 0.333333334\n";

static void parse_and_solve(void) {
  stcut_instance* inst = NULL;
  stcut_error err;
  EXPECT(stcut_instance_parse(kPath3, &inst, &err) == STCUT_OK);
  EXPECT(inst != NULL);
  EXPECT(stcut_instance_num_vertices(inst) == 3);
  EXPECT(stcut_instance_source(inst) == 0);
  EXPECT(stcut_instance_sink(inst) == 2);

  const char* methods[] = {"lp", "sdp", "dnc", "exact"};
  for (int i = 0; i < 4; ++i) {
    stcut_solve_options o;
    stcut_solve_options_init(&o);
    o.method = methods[i];
    o.seed = 1;
    stcut_result* r = NULL;
    EXPECT(stcut_solve(inst, &o, &r, &err) == STCUT_OK);
    EXPECT(stcut_result_st_separating(r));
    EXPECT(stcut_result_cut_size(r) >= 1);
    EXPECT(stcut_result_cut(r)[0] == 0);
    EXPECT(fabs(stcut_result_sparsity(r) - 0.75) <= 1e-8);
    EXPECT(strstr(stcut_result_json(r), "\"method\"") != NULL);
    stcut_result_free(r);
  }

  char* text = stcut_instance_to_text(inst);
  EXPECT(text != NULL);
  stcut_instance* back = NULL;
  EXPECT(stcut_instance_parse(text, &back, NULL) == STCUT_OK);
  char* again = stcut_instance_to_text(back);
  EXPECT(strcmp(text, again) == 0);
  stcut_string_free(again);
  stcut_string_free(text);
  stcut_instance_free(back);
  stcut_instance_free(inst);
}

static void errors(void) {
  stcut_instance* inst = NULL;
  stcut_error err;
  EXPECT(stcut_instance_parse("cap 0 1 1\n", &inst, &err) == STCUT_E_PARSE);
  EXPECT(inst == NULL);
  EXPECT(err.status == STCUT_E_PARSE);
  EXPECT(err.line == 1);
  EXPECT(strlen(err.message) > 0);
  EXPECT(stcut_exit_code(err.status) == 3);

  EXPECT(stcut_instance_parse("graph 2 0 1\ncap 0 1 1\ndem product\nmu 0 0.45\nmu 1 0.45\n", &inst, &err) ==
         STCUT_E_BAD_PROBABILITY);
  EXPECT(stcut_exit_code(STCUT_E_BAD_PROBABILITY) == 3);
  EXPECT(stcut_instance_parse("graph 2 0\n", &inst, NULL) == STCUT_E_MISSING_TERMINALS);
  EXPECT(stcut_instance_read("/nonexistent/stcut.txt", &inst, &err) == STCUT_E_IO);
  EXPECT(stcut_instance_parse(NULL, &inst, &err) == STCUT_E_INVALID_ARGUMENT);

  stcut_gen_options g;
  stcut_gen_options_init(&g);
  g.n = 30;
  EXPECT(stcut_generate(&g, &inst, &err) == STCUT_OK);
  stcut_solve_options o;
  stcut_solve_options_init(&o);
  o.method = "sdp";
  stcut_result* r = NULL;
  EXPECT(stcut_solve(inst, &o, &r, &err) == STCUT_E_SIZE_CEILING);
  EXPECT(r == NULL);
  EXPECT(stcut_exit_code(err.status) == 2);
  o.method = "bogus";
  EXPECT(stcut_solve(inst, &o, &r, &err) == STCUT_E_INVALID_ARGUMENT);
  stcut_instance_free(inst);

  EXPECT(strcmp(stcut_status_name(STCUT_OK), stcut_status_name(STCUT_E_PARSE)) != 0);
  EXPECT(stcut_exit_code(STCUT_OK) == 0);
  stcut_instance_free(NULL);
  stcut_result_free(NULL);
}

static void determinism(void) {
  stcut_gen_options g;
  stcut_gen_options_init(&g);
  g.n = 8;
  g.seed = 5;
  stcut_instance* inst = NULL;
  EXPECT(stcut_generate(&g, &inst, NULL) == STCUT_OK);
  stcut_solve_options o;
  stcut_solve_options_init(&o);
  o.method = "sdp";
  o.seed = 9;
  stcut_result* a = NULL;
  stcut_result* b = NULL;
  EXPECT(stcut_solve(inst, &o, &a, NULL) == STCUT_OK);
  EXPECT(stcut_solve(inst, &o, &b, NULL) == STCUT_OK);
  EXPECT(strcmp(stcut_result_json(a), stcut_result_json(b)) == 0);
  stcut_result_free(a);
  stcut_result_free(b);
  stcut_instance_free(inst);
}

int main(void) {
  parse_and_solve();
  errors();
  determinism();
  if (failures) {
    fprintf(stderr, "%d failure(s)\n", failures);
    return 1;
  }
  puts("capi ok");
  return 0;
}
