#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wcsf/curves.hpp"
#include "wcsf/flow.hpp"
#include "wcsf/geometry.hpp"
#include "wcsf/verification.hpp"

namespace wcsf {

struct Scenario {
  std::string name = "scenario";

  WarpKind kind = WarpKind::Left;
  int base_dim = 1;
  std::string warp_text = "1";
  FourierField warp = FourierField::constant(1.0);
  std::vector<std::string> base_text;  // empty: flat; else g11 (n=1) or g11, g12, g22 (n=2)
  std::vector<FourierField> base_entries;

  std::vector<std::string> init_text;
  std::vector<FourierField> init;
  GraphOptions graph;
  int m = 128;
  CurveMode mode = CurveMode::Graph;

  FlowOptions flow{.record_stride = 100};
  MonitorOptions monitor;  // tolerance is tol.bound

  bool verify_bounds = true;
  bool verify_residuals = true;
  bool verify_convergence = false;
  std::vector<int> levels{64, 128, 256};
  double window = 0.2;

  bool svg = true;

  WarpedProduct manifold() const;
  DiscreteCurve initial_curve() const;
};

// Flat `key = value` text; '#' starts a comment. Values may be quoted.
// Throws ParseError naming the line of the offending key.
Scenario parse_config(std::string_view text, std::string name = "scenario");
Scenario load_config(const std::filesystem::path& path);

struct ResidualSection {
  long triples = 0;
  long skipped_triples = 0;
  double evolution = 0.0;
  std::optional<double> evolution_squared_variant;  // Right only
  double commutator = 0.0;
  double gradient_identity = 0.0;
  ClosedFormCheck closed_forms_initial;
  ClosedFormCheck closed_forms_final;
};

struct FlowReport {
  std::string scenario;
  FlowSummary summary;
  std::optional<ThetaBoundReports> bounds;
  std::optional<BoundReport> dissipation;
  std::optional<ResidualSection> residuals;
  std::optional<StudyResult> study;
  double wall_seconds = 0.0;

  // Names of the failed checks; empty when every monitor passed.
  std::vector<std::string> failures() const;
  bool pass() const { return failures().empty(); }
  // 0 ok, 1 falsification, 2 GraphLoss, 3 Blowup.
  int exit_code() const;
  // Indented key-value text. Wall time is left out so the text is reproducible.
  std::string text(const Scenario& s) const;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFalsified = 1;
inline constexpr int kExitGraphLoss = 2;
inline constexpr int kExitBlowup = 3;
inline constexpr int kExitUsage = 64;

// Runs the flow with the enabled monitors. When out_dir is non-empty writes
// trajectory.csv, history.csv, report.txt and (if enabled) curves.svg, theta.svg.
FlowReport run_scenario(const Scenario& s, const std::filesystem::path& out_dir = {});

struct SuiteEntry {
  std::string name;
  int exit_code = 0;
  std::string stop;
  std::vector<std::string> failures;
  std::string error;  // parse or I/O failure
};

struct SuiteResult {
  std::vector<SuiteEntry> entries;
  int exit_code = 0;  // max over entries
};

// Runs every *.cfg file of dir (sorted by name) on up to `jobs` threads, each
// into out_dir/<stem>/, then writes out_dir/summary.txt. Throws
// Error(InvalidArgument) when dir has no scenario files.
SuiteResult run_suite(const std::filesystem::path& dir, const std::filesystem::path& out_dir, int jobs = 1);

// Artifact writers.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);
void write_history_csv(const std::filesystem::path& path, const std::vector<HistoryRow>& rows);
void write_curves_svg(const std::filesystem::path& path, const Trajectory& traj);
void write_theta_svg(const std::filesystem::path& path, const std::vector<HistoryRow>& rows);

}  // namespace wcsf
