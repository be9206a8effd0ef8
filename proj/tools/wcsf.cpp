#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <string>

#include "wcsf/wcsf.h"

namespace {

int report_error(const char* what) {
  std::fprintf(stderr, "wcsf: %s: %s\n", what, wcsf_last_error());
  return WCSF_EXIT_USAGE;
}

int run_one(const std::string& config, const std::string& out, bool full) {
  wcsf_scenario* s = nullptr;
  if (wcsf_scenario_load(config.c_str(), &s) != WCSF_OK) return report_error(config.c_str());
  if (full) wcsf_scenario_enable_full_verification(s);
  wcsf_report* r = nullptr;
  const wcsf_status st = wcsf_run(s, out.c_str(), &r);
  wcsf_scenario_free(s);
  if (st != WCSF_OK) return report_error(config.c_str());
  const int code = wcsf_report_exit_code(r);
  std::printf("%s", wcsf_report_text(r));
  std::fprintf(stderr, "wcsf: %s -> %s, stop %s, exit %d, %.2f s\n", config.c_str(), out.c_str(),
               wcsf_report_stop_reason(r), code, wcsf_report_wall_seconds(r));
  wcsf_report_free(r);
  return code;
}

std::string default_out(const std::string& config) {
  return (std::filesystem::path("wcsf_out") / std::filesystem::path(config).stem()).string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curve shortening flow in warped product manifolds"};
  app.require_subcommand(1);

  std::string config, out, dir;
  int jobs = 1;

  auto* run = app.add_subcommand("run", "run one scenario and write its artifacts");
  run->add_option("config", config, "scenario file")->required();
  run->add_option("--out", out, "output directory (default wcsf_out/<name>)");

  auto* verify = app.add_subcommand("verify", "run one scenario with bounds, residuals and the refinement study");
  verify->add_option("config", config, "scenario file")->required();
  verify->add_option("--out", out, "output directory (default wcsf_out/<name>)");

  auto* suite = app.add_subcommand("suite", "run every *.cfg of a directory");
  suite->add_option("dir", dir, "scenario directory")->required();
  suite->add_option("--jobs", jobs, "concurrent scenarios")->check(CLI::PositiveNumber);
  suite->add_option("--out", out, "output directory (default wcsf_out/<dir name>)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : WCSF_EXIT_USAGE;
  }

  if (*run || *verify) {
    if (out.empty()) out = default_out(config);
    return run_one(config, out, verify->parsed());
  }

  if (out.empty()) {
    auto d = std::filesystem::path(dir);
    if (d.filename().empty()) d = d.parent_path();
    out = (std::filesystem::path("wcsf_out") / d.filename()).string();
  }
  int code = 0;
  if (wcsf_suite(dir.c_str(), out.c_str(), jobs, &code) != WCSF_OK) return report_error(dir.c_str());
  std::FILE* f = std::fopen((std::filesystem::path(out) / "summary.txt").string().c_str(), "rb");
  if (f) {
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) std::fwrite(buf, 1, n, stdout);
    std::fclose(f);
  }
  return code;
}
