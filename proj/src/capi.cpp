#include "wcsf/wcsf.h"

#include <string>

#include "wcsf/error.hpp"
#include "wcsf/scenario.hpp"

struct wcsf_scenario {
  wcsf::Scenario value;
};

struct wcsf_report {
  wcsf::FlowReport value;
  std::string text;
  std::string stop;
};

namespace {

thread_local std::string g_error;
thread_local int g_error_line = 0;

wcsf_status fail(wcsf_status st, const std::string& msg, int line = 0) {
  g_error = msg;
  g_error_line = line;
  return st;
}

wcsf_status status_of(wcsf::ErrorCode c) {
  switch (c) {
    case wcsf::ErrorCode::Parse: return WCSF_ERR_PARSE;
    case wcsf::ErrorCode::Io: return WCSF_ERR_IO;
    case wcsf::ErrorCode::NotPositive: return WCSF_ERR_NOT_POSITIVE;
    default: return WCSF_ERR_INVALID_ARGUMENT;
  }
}

template <class F>
wcsf_status guarded(F&& f) {
  g_error.clear();
  g_error_line = 0;
  try {
    f();
    return WCSF_OK;
  } catch (const wcsf::ParseError& e) {
    return fail(WCSF_ERR_PARSE, e.what(), e.line());
  } catch (const wcsf::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::exception& e) {
    return fail(WCSF_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(WCSF_ERR_INTERNAL, "unknown failure");
  }
}

}  // namespace

extern "C" {

const char* wcsf_last_error(void) { return g_error.c_str(); }
int wcsf_last_error_line(void) { return g_error_line; }

wcsf_status wcsf_scenario_parse(const char* text, const char* name, wcsf_scenario** out) {
  if (!text || !out) return fail(WCSF_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new wcsf_scenario{wcsf::parse_config(text, name ? name : "scenario")}; });
}

wcsf_status wcsf_scenario_load(const char* path, wcsf_scenario** out) {
  if (!path || !out) return fail(WCSF_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new wcsf_scenario{wcsf::load_config(path)}; });
}

void wcsf_scenario_free(wcsf_scenario* s) { delete s; }

wcsf_status wcsf_scenario_enable_full_verification(wcsf_scenario* s) {
  if (!s) return fail(WCSF_ERR_INVALID_ARGUMENT, "null scenario");
  s->value.verify_bounds = true;
  s->value.verify_residuals = true;
  s->value.verify_convergence = true;
  return WCSF_OK;
}

wcsf_status wcsf_run(const wcsf_scenario* s, const char* out_dir, wcsf_report** out) {
  if (!s || !out) return fail(WCSF_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto* r = new wcsf_report{wcsf::run_scenario(s->value, out_dir ? out_dir : ""), {}, {}};
    r->text = r->value.text(s->value);
    r->stop = std::string(wcsf::to_string(r->value.summary.stop));
    *out = r;
  });
}

int wcsf_report_exit_code(const wcsf_report* r) { return r ? r->value.exit_code() : WCSF_EXIT_USAGE; }
const char* wcsf_report_stop_reason(const wcsf_report* r) { return r ? r->stop.c_str() : ""; }
double wcsf_report_final_time(const wcsf_report* r) { return r ? r->value.summary.t_final : 0.0; }
double wcsf_report_max_curvature(const wcsf_report* r) { return r ? r->value.summary.max_curvature : 0.0; }
double wcsf_report_wall_seconds(const wcsf_report* r) { return r ? r->value.wall_seconds : 0.0; }
const char* wcsf_report_text(const wcsf_report* r) { return r ? r->text.c_str() : ""; }
void wcsf_report_free(wcsf_report* r) { delete r; }

wcsf_status wcsf_suite(const char* dir, const char* out_dir, int jobs, int* exit_code) {
  if (!dir || !out_dir || !exit_code) return fail(WCSF_ERR_INVALID_ARGUMENT, "null argument");
  if (jobs < 1) return fail(WCSF_ERR_INVALID_ARGUMENT, "jobs must be >= 1");
  return guarded([&] { *exit_code = wcsf::run_suite(dir, out_dir, jobs).exit_code; });
}

}  // extern "C"
