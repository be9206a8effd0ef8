#include "wcsf/verification.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wcsf/error.hpp"
#include "wcsf/spectral.hpp"

namespace wcsf {

namespace {

constexpr int kConstantGrid = 4096;
// Nonuniform centered differences lose accuracy when one spacing collapses
// (the step capped at t_max); such triples are skipped and counted.
constexpr double kMinSpacingRatio = 0.1;

struct Weights {
  double prev = 0.0, cur = 0.0, next = 0.0;
  bool usable = false;
};

// Second-order first derivative at t0 from samples at t0 - h1, t0, t0 + h2.
Weights centered_weights(double tm, double t0, double tp) {
  const double h1 = t0 - tm;
  const double h2 = tp - t0;
  Weights w;
  if (!(h1 > 0.0 && h2 > 0.0)) return w;
  w.prev = -h2 / (h1 * (h1 + h2));
  w.cur = (h2 - h1) / (h1 * h2);
  w.next = h1 / (h2 * (h1 + h2));
  w.usable = std::min(h1, h2) >= kMinSpacingRatio * std::max(h1, h2);
  return w;
}

// Tangential node speed tau_j = <W_j - H_j, T_j>, zero in parametric mode.
std::vector<double> gauge_speed(const FlowState& s, const WarpedProduct& m) {
  const auto w = velocity(s, m);
  std::vector<double> tau(s.geom.size());
  for (int j = 0; j < s.geom.size(); ++j) {
    const Mat& g = s.geom.local[j].metric.g;
    tau[j] = (w[j] - s.geom.curvature[j]).dot(g * s.geom.tangent[j]);
  }
  return tau;
}

void require_graph_triple(const Trajectory& traj, std::size_t k) {
  if (traj.size() < 3 || k < 1 || k + 1 >= traj.size())
    throw Error(ErrorCode::InvalidArgument, "residual needs recorded states k-1, k, k+1");
  if (traj[k].curve.mode() != CurveMode::Graph)
    throw Error(ErrorCode::InvalidArgument, "time residuals need graph-mode trajectories");
}

struct TripleTerms {
  std::vector<double> dtheta;   // Lagrangian d theta / dt
  std::vector<double> t_theta;  // T(theta)
  std::vector<double> lap;      // Laplacian of theta
};

TripleTerms triple_terms(const FlowState& prev, const FlowState& cur, const FlowState& next, const WarpedProduct& m,
                         const Weights& w) {
  const CurveGeometry& g = cur.geom;
  TripleTerms out;
  out.t_theta = arc_derivative(g.theta, g);
  out.lap = arc_derivative(out.t_theta, g);
  const std::vector<double> tau = gauge_speed(cur, m);
  out.dtheta.resize(g.size());
  for (int j = 0; j < g.size(); ++j) {
    const double fixed_node = w.prev * prev.geom.theta[j] + w.cur * g.theta[j] + w.next * next.geom.theta[j];
    out.dtheta[j] = fixed_node - tau[j] * out.t_theta[j];
  }
  return out;
}

std::vector<double> evolution_residual(const TripleTerms& terms, const FlowState& cur, const WarpedProduct& m,
                                       bool squared_gradient_term) {
  const CurveGeometry& g = cur.geom;
  std::vector<double> res(g.size());
  for (int j = 0; j < g.size(); ++j) {
    const double theta = g.theta[j];
    const double a2 = g.curvature_norm[j] * g.curvature_norm[j];
    double rhs = terms.lap[j] + a2 * theta;
    const LocalGeometry& loc = g.local[j];
    if (m.kind() == WarpKind::Left) {
      const Mat& G = loc.metric.g;
      const TangentVec& dlog = loc.warp.grad;
      rhs += 2.0 * g.curvature[j].dot(G * dlog) * theta;
      rhs -= 2.0 * terms.t_theta[j] * g.tangent[j].dot(G * dlog);
    } else {
      const double coeff = squared_gradient_term ? theta * theta : theta;
      rhs += 2.0 * loc.warp.dlog * coeff * terms.t_theta[j];
      rhs -= loc.warp.d2log * theta * (1.0 - theta * theta);
    }
    res[j] = std::abs(terms.dtheta[j] - rhs);
  }
  return res;
}

double commutator_at(const FlowState& prev, const FlowState& cur, const FlowState& next, const WarpedProduct& m,
                     const Weights& w) {
  const CurveGeometry& g = cur.geom;
  const int n = g.size();
  const int d = m.dim();
  const auto vel = velocity(cur, m);
  const std::vector<double> tau = gauge_speed(cur, m);

  // dH/du, component by component
  std::vector<std::vector<double>> dh(d, std::vector<double>(n));
  for (int a = 0; a < d; ++a) {
    std::vector<double> comp(n);
    for (int j = 0; j < n; ++j) comp[j] = g.curvature[j](a);
    dh[a] = spectral::derivative(comp);
  }

  double worst = 0.0;
  for (int j = 0; j < n; ++j) {
    const LocalGeometry& loc = g.local[j];
    const TangentVec& t = g.tangent[j];
    const TangentVec& h = g.curvature[j];
    // covariant time derivative of T following the nodes, then undo the gauge: D_t T - tau H
    TangentVec dt_t = w.prev * prev.geom.tangent[j] + w.cur * t + w.next * next.geom.tangent[j];
    dt_t += loc.christoffel.contract(vel[j], t);
    dt_t -= tau[j] * h;
    // nabla_T H = (dH/du + Gamma(gamma', H)) / sigma
    TangentVec dh_j(d);
    for (int a = 0; a < d; ++a) dh_j(a) = dh[a][j];
    const TangentVec nabla_t_h = (dh_j + loc.christoffel.contract(g.velocity[j], h)) / g.speed[j];
    const double a2 = g.curvature_norm[j] * g.curvature_norm[j];
    const TangentVec r = dt_t - nabla_t_h - a2 * t;
    worst = std::max(worst, std::sqrt(std::max(0.0, r.dot(loc.metric.g * r))));
  }
  return worst;
}

double max_of(const std::vector<double>& v) {
  double out = 0.0;
  for (double x : v) out = std::max(out, x);
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

void finalize_orders(ResidualReport& r) {
  r.orders.clear();
  r.pass = r.max_residual.size() >= 2;
  for (std::size_t i = 0; i + 1 < r.max_residual.size(); ++i) {
    const double coarse = r.max_residual[i];
    const double fine = r.max_residual[i + 1];
    const bool at_floor = coarse <= kResidualFloor && fine <= kResidualFloor;
    const double order = fine > 0.0 && coarse > 0.0 ? std::log2(coarse / fine)
                                                     : std::numeric_limits<double>::infinity();
    r.orders.push_back(order);
    if (!(at_floor || order >= r.required_order)) r.pass = false;
  }
}

double left_rate_constant(const WarpedProduct& m) {
  if (m.kind() != WarpKind::Left) throw Error(ErrorCode::WrongManifold, "left manifold expected");
  double best = 0.0;
  m.warp().for_each_grid_point(kConstantGrid, [&](std::span<const double> x) {
    const LocalGeometry loc = m.local_at(WarpPoint(0.0, x));
    best = std::max(best, loc.warp.grad.dot(loc.metric.g * loc.warp.grad));
  });
  return best;
}

double left_drift_constant(const WarpedProduct& m, double t0, double min_theta0) {
  const double cl = left_rate_constant(m);
  const double psi_max = m.warp().grid_max(kConstantGrid);
  return 4.0 * cl * (1.0 + psi_max * psi_max * std::exp(cl * t0) / min_theta0);
}

double right_rate_constant(const WarpedProduct& m) {
  if (m.kind() != WarpKind::Right) throw Error(ErrorCode::WrongManifold, "right manifold expected");
  double best = 0.0;
  m.warp().for_each_grid_point(kConstantGrid, [&](std::span<const double> r) {
    const FieldJet j = m.warp().jet(r);
    const double dlog = j.grad(0) / j.value;
    best = std::max(best, std::abs(j.hess(0, 0) / j.value - dlog * dlog));
  });
  return best;
}

double right_drift_constant(const WarpedProduct& m) {
  if (m.kind() != WarpKind::Right) throw Error(ErrorCode::WrongManifold, "right manifold expected");
  double best = 0.0;
  m.warp().for_each_grid_point(kConstantGrid, [&](std::span<const double> r) {
    const FieldJet j = m.warp().jet(r);
    const double dlog = j.grad(0) / j.value;
    const double d2log = j.hess(0, 0) / j.value - dlog * dlog;
    best = std::max(best, 4.0 * dlog * dlog + std::abs(d2log));
  });
  return best;
}

CurveField<double> theta_time_derivative(const FlowState& prev, const FlowState& cur, const FlowState& next,
                                         const WarpedProduct& m) {
  return triple_terms(prev, cur, next, m, centered_weights(prev.t, cur.t, next.t)).dtheta;
}

CurveField<double> left_evolution_residual(const Trajectory& traj, const WarpedProduct& m, std::size_t k) {
  if (m.kind() != WarpKind::Left) throw Error(ErrorCode::WrongManifold, "left manifold expected");
  require_graph_triple(traj, k);
  const Weights w = centered_weights(traj[k - 1].t, traj[k].t, traj[k + 1].t);
  return evolution_residual(triple_terms(traj[k - 1], traj[k], traj[k + 1], m, w), traj[k], m, false);
}

CurveField<double> right_evolution_residual(const Trajectory& traj, const WarpedProduct& m, std::size_t k,
                                            bool squared_gradient_term) {
  if (m.kind() != WarpKind::Right) throw Error(ErrorCode::WrongManifold, "right manifold expected");
  require_graph_triple(traj, k);
  const Weights w = centered_weights(traj[k - 1].t, traj[k].t, traj[k + 1].t);
  return evolution_residual(triple_terms(traj[k - 1], traj[k], traj[k + 1], m, w), traj[k], m,
                            squared_gradient_term);
}

double gradient_identity_residual(const FlowState& s, const WarpedProduct& m) {
  const CurveGeometry& g = s.geom;
  const std::vector<double> t_theta = arc_derivative(g.theta, g);
  double worst = 0.0;
  for (int j = 0; j < g.size(); ++j) {
    const LocalGeometry& loc = g.local[j];
    double expected = loc.metric.g.row(0).dot(g.curvature[j]);  // <H, d_r>
    if (m.kind() == WarpKind::Right) expected += loc.warp.dlog * (1.0 - g.theta[j] * g.theta[j]);
    worst = std::max(worst, std::abs(t_theta[j] - expected));
  }
  return worst;
}

double commutator_residual(const Trajectory& traj, const WarpedProduct& m, std::size_t k) {
  require_graph_triple(traj, k);
  const Weights w = centered_weights(traj[k - 1].t, traj[k].t, traj[k + 1].t);
  return commutator_at(traj[k - 1], traj[k], traj[k + 1], m, w);
}

ClosedFormCheck theta_closed_forms(const FlowState& s, const WarpedProduct& m) {
  if (s.curve.mode() != CurveMode::Graph)
    throw Error(ErrorCode::InvalidArgument, "closed forms apply to graph-mode curves");
  ClosedFormCheck out;
  const int n = m.base_dim();
  for (int j = 0; j < s.curve.size(); ++j) {
    const WarpPoint p = s.curve.point(j);
    const BaseMetric::Jet base = m.base().eval(p.base());
    const Vec df = s.geom.velocity[j].tail(n);  // f'(r); r' = 1 in graph parametrization
    const double df2 = df.dot(base.g * df);
    double direct, alternative;
    if (m.kind() == WarpKind::Left) {
      const double psi = m.warp().value(p.base());
      direct = psi * psi / std::sqrt(psi * psi + df2);
      alternative = 1.0 / std::sqrt(1.0 + psi * psi * df2);
    } else {
      const double phi = m.warp().value(p.r());
      direct = 1.0 / std::sqrt(1.0 + phi * phi * df2);
      alternative = 1.0 / std::sqrt(1.0 + df2 / (phi * phi));
    }
    out.direct = std::max(out.direct, std::abs(s.geom.theta[j] - direct));
    out.alternative = std::max(out.alternative, std::abs(s.geom.theta[j] - alternative));
  }
  return out;
}

// ---------------------------------------------------------------------------

RunMonitor::RunMonitor(const WarpedProduct& m, MonitorOptions opts, int history_stride)
    : m_(m), opts_(opts), history_stride_(std::max(1, history_stride)) {
  rate_ = opts_.rate_override ? *opts_.rate_override
                              : (m.kind() == WarpKind::Left ? left_rate_constant(m) : right_rate_constant(m));
  lower_.name = "theta_lower_bound";
  lower_.constant = rate_;
  lower_.tolerance = opts_.tolerance;
  if (opts_.rate_override)
    lower_.inputs = "override";
  else if (m.kind() == WarpKind::Left)
    lower_.inputs = "C_L = max |D log psi|_g^2 over a 4096-point grid";
  else
    lower_.inputs = "C_R = max |(log phi)''| over a 4096-point grid";
  dissipation_.name = "length_dissipation";
  dissipation_.tolerance = 1e-10;
}

void RunMonitor::observe(const FlowState& s) {
  const CurveGeometry& g = s.geom;
  const double min_theta = g.min_theta();
  if (observed_ == 0) min_theta0_ = min_theta;

  // theta >= exp(-C t) min theta(0)
  const double bound = std::exp(-rate_ * s.t) * min_theta0_;
  const double slack = min_theta - bound;
  ++lower_.samples;
  if (slack < lower_.worst_slack) {
    lower_.worst_slack = slack;
    lower_.worst_time = s.t;
  }

  max_gradient_ = std::max(max_gradient_, gradient_identity_residual(s, m_));

  if (!window_.empty()) {
    const FlowState& prev = window_.back();
    const double dt = s.t - prev.t;
    if (g.length > prev.geom.length + dissipation_.tolerance) dissipation_.monotone = false;
    const double prev_dt = window_.size() >= 2 ? prev.t - window_[window_.size() - 2].t : dt;
    if (dt >= kMinSpacingRatio * prev_dt) {
      const double rate = (g.length - prev.geom.length) / dt;
      const double energy = 0.5 * (g.curvature_energy() + prev.geom.curvature_energy());
      dissipation_.max_residual = std::max(dissipation_.max_residual, std::abs(rate + energy));
      ++dissipation_.samples;
    }
  }

  last_row_ = HistoryRow{s.t, min_theta, bound, g.length, g.max_curvature()};
  if (observed_ % history_stride_ == 0) history_.push_back(last_row_);
  last_t_ = s.t;
  ++observed_;

  window_.push_back(s);
  if (window_.size() > 3) window_.pop_front();
  if (opts_.evaluate_triples && window_.size() == 3 && s.curve.mode() == CurveMode::Graph) process_triple();
}

void RunMonitor::process_triple() {
  const FlowState& prev = window_[0];
  const FlowState& cur = window_[1];
  const FlowState& next = window_[2];
  const Weights w = centered_weights(prev.t, cur.t, next.t);
  if (!w.usable) {
    ++skipped_;
    return;
  }
  ++triples_;
  const TripleTerms terms = triple_terms(prev, cur, next, m_, w);
  max_evolution_ = std::max(max_evolution_, max_of(evolution_residual(terms, cur, m_, false)));
  if (m_.kind() == WarpKind::Right)
    max_evolution_sq_ = std::max(max_evolution_sq_, max_of(evolution_residual(terms, cur, m_, true)));
  max_commutator_ = std::max(max_commutator_, commutator_at(prev, cur, next, m_, w));

  const CurveGeometry& g = cur.geom;
  for (int j = 0; j < g.size(); ++j) {
    const double a2 = g.curvature_norm[j] * g.curvature_norm[j];
    const double raw = terms.dtheta[j] - terms.lap[j] - 0.5 * a2 * g.theta[j];
    if (raw < worst_drift_raw_) {
      worst_drift_raw_ = raw;
      worst_drift_time_ = cur.t;
    }
  }
  ++drift_samples_;
}

ThetaBoundReports RunMonitor::theta_bounds() const {
  ThetaBoundReports out;
  out.lower = lower_;
  out.lower.pass = lower_.worst_slack >= -opts_.tolerance;

  BoundReport& d = out.drift;
  d.name = "theta_drift_inequality";
  d.tolerance = opts_.tolerance;
  d.samples = drift_samples_;
  if (opts_.drift_override) {
    d.constant = *opts_.drift_override;
    d.inputs = "override";
  } else if (m_.kind() == WarpKind::Left) {
    d.constant = left_drift_constant(m_, last_t_, min_theta0_);
    d.inputs = "4 C_L (1 + max psi^2 exp(C_L t0) / min theta(0)), t0 = " + fmt(last_t_) +
               ", min theta(0) = " + fmt(min_theta0_);
  } else {
    d.constant = right_drift_constant(m_);
    d.inputs = "max 4 ((log phi)')^2 + |(log phi)''| over a 4096-point grid";
  }
  if (drift_samples_ > 0) {
    d.worst_slack = worst_drift_raw_ + d.constant;
    d.worst_time = worst_drift_time_;
  }
  d.pass = d.worst_slack >= -opts_.tolerance;
  return out;
}

BoundReport RunMonitor::dissipation() const {
  BoundReport d = dissipation_;
  d.worst_slack = -d.max_residual;
  d.pass = d.monotone;
  return d;
}

std::vector<HistoryRow> RunMonitor::history_with_last() const {
  std::vector<HistoryRow> rows = history_;
  if (observed_ > 0 && (rows.empty() || rows.back().t != last_row_.t)) rows.push_back(last_row_);
  return rows;
}

ThetaBoundReports theta_bound_monitor(const Trajectory& traj, const WarpedProduct& m, const MonitorOptions& opts) {
  RunMonitor mon(m, opts);
  for (const auto& s : traj.states()) mon.observe(s);
  return mon.theta_bounds();
}

BoundReport dissipation_monitor(const Trajectory& traj, const WarpedProduct& m) {
  RunMonitor mon(m, MonitorOptions{});
  for (const auto& s : traj.states()) mon.observe(s);
  return mon.dissipation();
}

// ---------------------------------------------------------------------------

bool StudyResult::pass() const {
  return evolution.pass && commutator.pass && dissipation.pass && gradient_identity.pass;
}

StudyResult convergence_study(const WarpedProduct& m, const StudySetup& setup) {
  if (setup.levels.size() < 2) throw Error(ErrorCode::InvalidArgument, "refinement study needs two or more levels");
  StudyResult out;
  out.evolution = {m.kind() == WarpKind::Left ? "left_evolution" : "right_evolution", {}, {}, {}, 1.8, false};
  out.evolution_squared_variant = {"right_evolution_squared_gradient", {}, {}, {}, 1.8, false};
  out.commutator = {"commutator", {}, {}, {}, 1.5, false};
  out.dissipation = {"dissipation", {}, {}, {}, 1.8, false};
  out.gradient_identity = {"gradient_identity", {}, {}, {}, std::log2(3.5), false};

  for (int level : setup.levels) {
    const DiscreteCurve c = make_graph_curve(setup.init, level, setup.graph);
    FlowOptions opts;
    opts.cfl = setup.cfl;
    opts.t_max = setup.window;
    opts.stop_on_convergence = false;
    opts.record_stride = 1 << 30;
    RunMonitor mon(m, MonitorOptions{});
    run_flow(m, c, opts, [&](const FlowState& s) { mon.observe(s); });
    for (ResidualReport* r : {&out.evolution, &out.evolution_squared_variant, &out.commutator, &out.dissipation,
                              &out.gradient_identity})
      r->grids.push_back(level);
    out.evolution.max_residual.push_back(mon.max_evolution_residual());
    out.evolution_squared_variant.max_residual.push_back(mon.max_evolution_residual_squared_variant());
    out.commutator.max_residual.push_back(mon.max_commutator_residual());
    out.dissipation.max_residual.push_back(mon.dissipation().max_residual);
    out.gradient_identity.max_residual.push_back(mon.max_gradient_identity_residual());
  }
  for (ResidualReport* r : {&out.evolution, &out.evolution_squared_variant, &out.commutator, &out.dissipation,
                            &out.gradient_identity})
    finalize_orders(*r);
  return out;
}

}  // namespace wcsf
