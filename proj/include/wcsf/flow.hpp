#pragma once

#include <functional>
#include <limits>
#include <string_view>
#include <vector>

#include "wcsf/curves.hpp"
#include "wcsf/geometry.hpp"

namespace wcsf {

struct FlowOptions {
  double cfl = 0.25;
  double tol_geo = 1e-6;      // Converged when max|A| drops below this
  double theta_floor = 1e-3;  // GraphLoss when min normalized angle drops below this
  double a_ceiling = 1e6;     // Blowup when max|A| exceeds this
  double t_max = 50.0;
  int record_stride = 1;      // record every k-th step (the final state is always recorded)
  // Disable the Converged stop (refinement studies integrate over a fixed window).
  bool stop_on_convergence = true;
};

// A curve at time t with its geometry evaluated.
struct FlowState {
  DiscreteCurve curve;
  double t = 0.0;
  CurveGeometry geom;

  static FlowState make(DiscreteCurve c, const WarpedProduct& m, double t);
};

enum class StopReason { Converged, MaxTime, GraphLoss, Blowup };
std::string_view to_string(StopReason r);

class Trajectory {
 public:
  // Throws unless t is strictly greater than the last recorded time.
  void push(FlowState s);
  const std::vector<FlowState>& states() const noexcept { return states_; }
  std::size_t size() const noexcept { return states_.size(); }
  const FlowState& operator[](std::size_t i) const { return states_[i]; }
  const FlowState& back() const { return states_.back(); }

 private:
  std::vector<FlowState> states_;
};

// Node velocity: H in parametric mode; H - H^0 gamma' in graph mode, whose
// r-component vanishes so the nodes stay on their r = u_j fibres.
CurveField<TangentVec> velocity(const FlowState& s, const WarpedProduct& m);

// cfl * (min_j |gamma'_j| 2pi/M)^2, capped at t_max - t.
double adaptive_dt(const FlowState& s, double cfl, double t_max = std::numeric_limits<double>::infinity());

// Classical four-stage Runge-Kutta step. Throws Error(InvalidArgument) on
// non-finite coordinates; run() reports that as Blowup.
FlowState step_rk4(const FlowState& s, const WarpedProduct& m, double dt);

struct FlowSummary {
  StopReason stop = StopReason::MaxTime;
  double t_final = 0.0;
  long steps = 0;
  double max_curvature = 0.0;
  double min_theta_hat = 0.0;
  double initial_length = 0.0;
  double final_length = 0.0;
  std::vector<double> limit_point;  // mean base coordinates of the final curve, reduced mod 2pi
  double limit_warp_gradient = 0.0; // |D log psi|_g at the limit point (Left only)
  bool graph_loss_flag = false;     // GraphLoss contradicts the preservation of graphs
  bool converging_undecided = false;  // MaxTime while max|A| was still decreasing
};

struct FlowRun {
  Trajectory trajectory;
  FlowSummary summary;
};

// Called with every accepted state in time order, starting with the initial one.
using StateObserver = std::function<void(const FlowState&)>;

FlowRun run_flow(const WarpedProduct& m, const DiscreteCurve& initial, const FlowOptions& opts,
                 const StateObserver& observer = {});

}  // namespace wcsf
