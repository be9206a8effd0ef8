#ifndef WCSF_H
#define WCSF_H

#if defined(WCSF_BUILDING_LIBRARY)
#define WCSF_API __attribute__((visibility("default")))
#else
#define WCSF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct wcsf_scenario wcsf_scenario;
typedef struct wcsf_report wcsf_report;

typedef enum wcsf_status {
  WCSF_OK = 0,
  WCSF_ERR_INVALID_ARGUMENT = 1,
  WCSF_ERR_PARSE = 2,
  WCSF_ERR_IO = 3,
  WCSF_ERR_NOT_POSITIVE = 4,
  WCSF_ERR_INTERNAL = 5
} wcsf_status;

/* Exit codes of runs and suites. */
enum {
  WCSF_EXIT_OK = 0,
  WCSF_EXIT_FALSIFIED = 1,
  WCSF_EXIT_GRAPH_LOSS = 2,
  WCSF_EXIT_BLOWUP = 3,
  WCSF_EXIT_USAGE = 64
};

/* Message of the last failed call on this thread; never NULL. */
WCSF_API const char* wcsf_last_error(void);
/* Config line of the last parse failure on this thread, 0 if none. */
WCSF_API int wcsf_last_error_line(void);

WCSF_API wcsf_status wcsf_scenario_parse(const char* text, const char* name, wcsf_scenario** out);
WCSF_API wcsf_status wcsf_scenario_load(const char* path, wcsf_scenario** out);
WCSF_API void wcsf_scenario_free(wcsf_scenario* s);

/* Turns on bounds, residuals and the refinement study. */
WCSF_API wcsf_status wcsf_scenario_enable_full_verification(wcsf_scenario* s);

/* out_dir may be NULL or empty: no files are written. */
WCSF_API wcsf_status wcsf_run(const wcsf_scenario* s, const char* out_dir, wcsf_report** out);

WCSF_API int wcsf_report_exit_code(const wcsf_report* r);
WCSF_API const char* wcsf_report_stop_reason(const wcsf_report* r);
WCSF_API double wcsf_report_final_time(const wcsf_report* r);
WCSF_API double wcsf_report_max_curvature(const wcsf_report* r);
WCSF_API double wcsf_report_wall_seconds(const wcsf_report* r);
/* The report.txt contents; owned by the report. */
WCSF_API const char* wcsf_report_text(const wcsf_report* r);
WCSF_API void wcsf_report_free(wcsf_report* r);

/* Runs every *.cfg in dir. On WCSF_OK *exit_code holds the suite exit code. */
WCSF_API wcsf_status wcsf_suite(const char* dir, const char* out_dir, int jobs, int* exit_code);

#ifdef __cplusplus
}
#endif

#endif
