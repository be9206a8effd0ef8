#include <stdio.h>
#include <string.h>

#include "wcsf/wcsf.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

static const char* kShort =
    "manifold.kind = left\n"
    "warp = \"exp(0.3*cos(x))\"\n"
    "init = \"0.3*sin(r)\"\n"
    "grid.m = 32\n"
    "time.t_max = 0.05\n";

int main(int argc, char** argv) {
  const char* out = argc > 2 ? argv[2] : "capi_out";
  wcsf_scenario* s = NULL;
  wcsf_report* r = NULL;

  EXPECT(wcsf_scenario_parse("grid.m = 100\n", "bad", &s) == WCSF_ERR_PARSE);
  EXPECT(s == NULL);
  EXPECT(wcsf_last_error_line() == 1);
  EXPECT(strstr(wcsf_last_error(), "power of two") != NULL);

  EXPECT(wcsf_scenario_parse("warp = \"0.5 + cos(x)\"\n", "bad", &s) == WCSF_ERR_PARSE);
  EXPECT(strstr(wcsf_last_error(), "warp not positive") != NULL);

  EXPECT(wcsf_scenario_load("/nonexistent/x.cfg", &s) == WCSF_ERR_IO);
  EXPECT(wcsf_run(NULL, NULL, &r) == WCSF_ERR_INVALID_ARGUMENT);

  EXPECT(wcsf_scenario_parse(kShort, "short", &s) == WCSF_OK);
  EXPECT(wcsf_run(s, out, &r) == WCSF_OK);
  EXPECT(wcsf_report_exit_code(r) == WCSF_EXIT_OK);
  EXPECT(strcmp(wcsf_report_stop_reason(r), "MaxTime") == 0);
  EXPECT(wcsf_report_final_time(r) == 0.05);
  EXPECT(wcsf_report_max_curvature(r) > 0.0);
  EXPECT(strstr(wcsf_report_text(r), "scenario: short") != NULL);
  wcsf_report_free(r);

  EXPECT(wcsf_scenario_enable_full_verification(s) == WCSF_OK);
  wcsf_scenario_free(s);

  {
    int code = -1;
    EXPECT(wcsf_suite("/nonexistent_dir_for_wcsf", out, 1, &code) != WCSF_OK);
    EXPECT(wcsf_suite(".", out, 0, &code) == WCSF_ERR_INVALID_ARGUMENT);
  }

  if (failures == 0) printf("capi: all checks passed\n");
  return failures == 0 ? 0 : 1;
}
