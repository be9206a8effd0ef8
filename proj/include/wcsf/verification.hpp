#pragma once

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "wcsf/curves.hpp"
#include "wcsf/flow.hpp"
#include "wcsf/geometry.hpp"

namespace wcsf {

// One-sided check LHS - RHS >= -tolerance, tracked over a run.
struct BoundReport {
  std::string name;
  double constant = 0.0;
  std::string inputs;
  double worst_slack = std::numeric_limits<double>::infinity();
  double worst_time = 0.0;
  double tolerance = 0.0;
  long samples = 0;
  bool pass = true;
  // dissipation only
  double max_residual = 0.0;
  bool monotone = true;
};

// Max residual per grid level and the observed convergence orders between levels.
struct ResidualReport {
  std::string name;
  std::vector<int> grids;
  std::vector<double> max_residual;
  std::vector<double> orders;  // log2(res(M) / res(2M))
  double required_order = 0.0;
  bool pass = false;
};

// Residuals at or below this are treated as exact (rounding level).
inline constexpr double kResidualFloor = 1e-10;

// Fills orders and pass. A pair of levels passes when the order meets the
// requirement or both residuals sit at the rounding floor.
void finalize_orders(ResidualReport& r);

// --- constants from the warp, maximized on a 4096-point grid ---------------
double left_rate_constant(const WarpedProduct& m);   // max |D log psi|_g^2
double left_drift_constant(const WarpedProduct& m, double t0, double min_theta0);
double right_rate_constant(const WarpedProduct& m);  // max |(log phi)''|
double right_drift_constant(const WarpedProduct& m); // max 4 (log phi)'^2 + |(log phi)''|

// --- single-state and three-state residuals --------------------------------

// Lagrangian (normal-flow) time derivative of theta at the middle state of a
// recorded triple. The graph gauge moves nodes tangentially by tau T, so the
// fixed-node difference quotient is corrected by -tau T(theta).
CurveField<double> theta_time_derivative(const FlowState& prev, const FlowState& cur, const FlowState& next,
                                         const WarpedProduct& m);

CurveField<double> left_evolution_residual(const Trajectory& traj, const WarpedProduct& m, std::size_t k);
// squared_gradient_term swaps Theta for Theta^2 in the gradient coefficient.
CurveField<double> right_evolution_residual(const Trajectory& traj, const WarpedProduct& m, std::size_t k,
                                            bool squared_gradient_term = false);
double gradient_identity_residual(const FlowState& s, const WarpedProduct& m);
double commutator_residual(const Trajectory& traj, const WarpedProduct& m, std::size_t k);

// Max deviation of theta from the two graph closed forms: the one obtained from
// <T, d_r> directly, and the alternative normalization of |df|.
struct ClosedFormCheck {
  double direct = 0.0;
  double alternative = 0.0;
};
ClosedFormCheck theta_closed_forms(const FlowState& s, const WarpedProduct& m);

// --- monitors ---------------------------------------------------------------

struct MonitorOptions {
  double tolerance = 1e-4;
  std::optional<double> rate_override;   // replaces C_L / C_R
  std::optional<double> drift_override;  // replaces C_L(t0, gamma0) / C_R(phi)
  // Off: only single-state checks run (no drift inequality, evolution or commutator residuals).
  bool evaluate_triples = true;
};

struct ThetaBoundReports {
  BoundReport lower;  // theta >= exp(-C t) min theta(0)
  BoundReport drift;  // d theta/dt >= Laplacian + |A|^2 theta / 2 - C
};

struct HistoryRow {
  double t;
  double min_theta;
  double lower_bound;
  double length;
  double max_curvature;
};

// Streaming evaluator fed every accepted state of a run in time order. Keeps a
// three-state window; all trajectory-level monitors are built on it.
class RunMonitor {
 public:
  RunMonitor(const WarpedProduct& m, MonitorOptions opts, int history_stride = 1);

  void observe(const FlowState& s);

  ThetaBoundReports theta_bounds() const;
  BoundReport dissipation() const;
  double max_evolution_residual() const { return max_evolution_; }
  // Right only: the residual with the squared gradient coefficient.
  double max_evolution_residual_squared_variant() const { return max_evolution_sq_; }
  double max_commutator_residual() const { return max_commutator_; }
  double max_gradient_identity_residual() const { return max_gradient_; }
  long triples() const { return triples_; }
  long skipped_triples() const { return skipped_; }
  const std::vector<HistoryRow>& history() const { return history_; }
  // Always includes the most recent state.
  std::vector<HistoryRow> history_with_last() const;

 private:
  void process_triple();

  WarpedProduct m_;
  MonitorOptions opts_;
  int history_stride_;
  std::deque<FlowState> window_;
  long observed_ = 0;
  double rate_ = 0.0;
  double min_theta0_ = 0.0;
  double last_t_ = 0.0;
  HistoryRow last_row_{};

  BoundReport lower_;
  double worst_drift_raw_ = std::numeric_limits<double>::infinity();  // min of LHS - RHS without C
  double worst_drift_time_ = 0.0;
  long drift_samples_ = 0;
  BoundReport dissipation_;
  double max_evolution_ = 0.0;
  double max_evolution_sq_ = 0.0;
  double max_commutator_ = 0.0;
  double max_gradient_ = 0.0;
  long triples_ = 0;
  long skipped_ = 0;
  std::vector<HistoryRow> history_;
};

ThetaBoundReports theta_bound_monitor(const Trajectory& traj, const WarpedProduct& m, const MonitorOptions& opts = {});
BoundReport dissipation_monitor(const Trajectory& traj, const WarpedProduct& m);

// --- refinement study -------------------------------------------------------

struct StudySetup {
  std::vector<FourierField> init;
  GraphOptions graph;
  std::vector<int> levels{64, 128, 256};
  double window = 0.2;
  double cfl = 0.25;
};

struct StudyResult {
  ResidualReport evolution;
  ResidualReport evolution_squared_variant;  // Right only
  ResidualReport commutator;
  ResidualReport dissipation;
  ResidualReport gradient_identity;
  bool pass() const;
};

// Runs the graph flow at every level over [0, window] with dt ~ M^-2, recording
// every step, and collects the max residual of each identity per level.
StudyResult convergence_study(const WarpedProduct& m, const StudySetup& setup);

}  // namespace wcsf
