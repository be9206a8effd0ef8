#include "wcsf/flow.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "wcsf/error.hpp"

namespace wcsf {

FlowState FlowState::make(DiscreteCurve c, const WarpedProduct& m, double t) {
  CurveGeometry g = analyze(c, m);
  return FlowState{std::move(c), t, std::move(g)};
}

std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::Converged: return "Converged";
    case StopReason::MaxTime: return "MaxTime";
    case StopReason::GraphLoss: return "GraphLoss";
    case StopReason::Blowup: return "Blowup";
  }
  return "?";
}

void Trajectory::push(FlowState s) {
  if (!states_.empty() && !(s.t > states_.back().t))
    throw Error(ErrorCode::InvalidArgument, "trajectory times must be strictly increasing");
  states_.push_back(std::move(s));
}

CurveField<TangentVec> velocity(const FlowState& s, const WarpedProduct& m) {
  (void)m;
  const CurveGeometry& g = s.geom;
  CurveField<TangentVec> w(g.size());
  for (int j = 0; j < g.size(); ++j) {
    w[j] = g.curvature[j];
    if (s.curve.mode() == CurveMode::Graph) {
      // gamma'^0 = 1 in the graph parametrization
      w[j] -= g.curvature[j](0) * g.velocity[j];
      w[j](0) = 0.0;
    }
  }
  return w;
}

double adaptive_dt(const FlowState& s, double cfl, double t_max) {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw Error(ErrorCode::InvalidArgument, "cfl must lie in (0, 1]");
  const double min_speed = *std::min_element(s.geom.speed.begin(), s.geom.speed.end());
  const double ds = min_speed * kTwoPi / s.curve.size();
  const double dt = cfl * ds * ds;
  return std::min(dt, t_max - s.t);
}

namespace {

// p + scale * v, on the coordinates that move in this mode.
std::vector<std::vector<double>> displaced(const DiscreteCurve& c, const CurveField<TangentVec>& v, double scale) {
  std::vector<std::vector<double>> p = c.periodic_parts();
  const int first = c.mode() == CurveMode::Graph ? 1 : 0;
  for (int a = first; a < c.dim(); ++a)
    for (int j = 0; j < c.size(); ++j) p[a][j] += scale * v[j](a);
  return p;
}

bool finite_geometry(const CurveGeometry& g) {
  for (int j = 0; j < g.size(); ++j)
    if (!std::isfinite(g.curvature_norm[j]) || !std::isfinite(g.speed[j]) || !std::isfinite(g.theta[j]))
      return false;
  return true;
}

}  // namespace

FlowState step_rk4(const FlowState& s, const WarpedProduct& m, double dt) {
  const DiscreteCurve& c = s.curve;
  const auto k1 = velocity(s, m);
  const FlowState s2 = FlowState::make(c.with_periodic(displaced(c, k1, 0.5 * dt)), m, s.t + 0.5 * dt);
  const auto k2 = velocity(s2, m);
  const FlowState s3 = FlowState::make(c.with_periodic(displaced(c, k2, 0.5 * dt)), m, s.t + 0.5 * dt);
  const auto k3 = velocity(s3, m);
  const FlowState s4 = FlowState::make(c.with_periodic(displaced(c, k3, dt)), m, s.t + dt);
  const auto k4 = velocity(s4, m);

  std::vector<std::vector<double>> p = c.periodic_parts();
  const int first = c.mode() == CurveMode::Graph ? 1 : 0;
  for (int a = first; a < c.dim(); ++a)
    for (int j = 0; j < c.size(); ++j)
      p[a][j] += dt / 6.0 * (k1[j](a) + 2.0 * k2[j](a) + 2.0 * k3[j](a) + k4[j](a));
  return FlowState::make(c.with_periodic(std::move(p)), m, s.t + dt);
}

FlowRun run_flow(const WarpedProduct& m, const DiscreteCurve& initial, const FlowOptions& opts,
                 const StateObserver& observer) {
  if (opts.record_stride < 1) throw Error(ErrorCode::InvalidArgument, "record stride must be >= 1");
  if (!(opts.t_max >= 0.0)) throw Error(ErrorCode::InvalidArgument, "t_max must be >= 0");

  FlowRun out;
  FlowSummary& sum = out.summary;
  FlowState s = FlowState::make(initial, m, 0.0);
  sum.initial_length = s.geom.length;
  if (observer) observer(s);
  out.trajectory.push(s);

  // (t, max|A|) at recorded states, for the converging-undecided verdict
  std::vector<std::pair<double, double>> curvature_history{{s.t, s.geom.max_curvature()}};

  auto stop_reason = [&](const FlowState& st) -> std::optional<StopReason> {
    const double a = st.geom.max_curvature();
    if (!finite_geometry(st.geom) || a > opts.a_ceiling) return StopReason::Blowup;
    if (st.geom.min_theta_hat() < opts.theta_floor) return StopReason::GraphLoss;
    if (opts.stop_on_convergence && a < opts.tol_geo) return StopReason::Converged;
    if (st.t >= opts.t_max) return StopReason::MaxTime;
    return std::nullopt;
  };

  std::optional<StopReason> reason = stop_reason(s);
  while (!reason) {
    const double dt = adaptive_dt(s, opts.cfl, opts.t_max);
    const bool capped = dt >= opts.t_max - s.t;
    try {
      FlowState next = step_rk4(s, m, dt);
      if (capped) next.t = opts.t_max;
      s = std::move(next);
    } catch (const Error&) {
      // non-finite coordinates or a collapsed node
      reason = StopReason::Blowup;
      break;
    }
    ++sum.steps;
    if (observer) observer(s);
    reason = stop_reason(s);
    if (reason || sum.steps % opts.record_stride == 0) {
      out.trajectory.push(s);
      curvature_history.emplace_back(s.t, s.geom.max_curvature());
    }
  }

  sum.stop = *reason;
  sum.t_final = s.t;
  sum.max_curvature = s.geom.max_curvature();
  sum.min_theta_hat = s.geom.min_theta_hat();
  sum.final_length = s.geom.length;
  sum.graph_loss_flag = sum.stop == StopReason::GraphLoss;

  const int n = s.curve.base_dim();
  std::array<double, kMaxBaseDim> limit{};
  for (int i = 0; i < n; ++i) {
    double mean = 0.0;
    for (int j = 0; j < s.curve.size(); ++j) mean += s.curve.lifted(i + 1, j);
    limit[i] = wrap_angle(mean / s.curve.size());
    sum.limit_point.push_back(limit[i]);
  }
  if (m.kind() == WarpKind::Left) {
    const LocalGeometry loc = m.local_at(WarpPoint(0.0, std::span<const double>(limit.data(), n)));
    sum.limit_warp_gradient = std::sqrt(loc.warp.grad.dot(loc.metric.g * loc.warp.grad));
  }

  if (sum.stop == StopReason::MaxTime && sum.steps > 0) {
    const double half = 0.5 * sum.t_final;
    auto mid = std::min_element(curvature_history.begin(), curvature_history.end(),
                                [half](const auto& a, const auto& b) {
                                  return std::abs(a.first - half) < std::abs(b.first - half);
                                });
    sum.converging_undecided = sum.max_curvature < mid->second;
  }
  return out;
}

}  // namespace wcsf
