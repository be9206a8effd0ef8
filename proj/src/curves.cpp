#include "wcsf/curves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wcsf/error.hpp"
#include "wcsf/spectral.hpp"

namespace wcsf {

namespace {

constexpr double kImmersionFloor = 1e-10;

void check_node_count(int m) {
  if (m < DiscreteCurve::kMinNodes || !spectral::is_power_of_two(m))
    throw Error(ErrorCode::InvalidArgument,
                "node count must be a power of two >= " + std::to_string(DiscreteCurve::kMinNodes) + ", got " +
                    std::to_string(m));
}

}  // namespace

DiscreteCurve::DiscreteCurve(CurveMode mode, std::vector<std::vector<double>> periodic, std::vector<int> winding)
    : mode_(mode), m_(0), periodic_(std::move(periodic)), winding_(std::move(winding)) {
  const int d = static_cast<int>(periodic_.size());
  if (d < 2 || d > kMaxDim) throw Error(ErrorCode::InvalidArgument, "curve needs 2 or 3 coordinates");
  if (static_cast<int>(winding_.size()) != d) throw Error(ErrorCode::InvalidArgument, "winding size mismatch");
  m_ = static_cast<int>(periodic_.front().size());
  check_node_count(m_);
  for (const auto& p : periodic_) {
    if (static_cast<int>(p.size()) != m_) throw Error(ErrorCode::InvalidArgument, "ragged curve samples");
    for (double v : p)
      if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "non-finite curve sample");
  }
}

DiscreteCurve DiscreteCurve::graph_from_samples(std::vector<std::vector<double>> base_periodic,
                                                std::vector<int> winding) {
  if (base_periodic.empty()) throw Error(ErrorCode::InvalidArgument, "graph needs at least one base component");
  if (winding.empty()) winding.assign(base_periodic.size(), 0);
  std::vector<std::vector<double>> coords;
  coords.emplace_back(base_periodic.front().size(), 0.0);
  for (auto& p : base_periodic) coords.push_back(std::move(p));
  std::vector<int> w{1};
  w.insert(w.end(), winding.begin(), winding.end());
  return DiscreteCurve(CurveMode::Graph, std::move(coords), std::move(w));
}

DiscreteCurve DiscreteCurve::parametric(std::vector<std::vector<double>> coords, std::vector<int> winding) {
  return DiscreteCurve(CurveMode::Parametric, std::move(coords), std::move(winding));
}

WarpPoint DiscreteCurve::point(int j) const {
  std::array<double, kMaxBaseDim> x{};
  for (int i = 0; i < base_dim(); ++i) x[i] = lifted(i + 1, j);
  return WarpPoint(lifted(0, j), std::span<const double>(x.data(), base_dim()));
}

DiscreteCurve DiscreteCurve::with_periodic(std::vector<std::vector<double>> coords) const {
  for (std::size_t a = (mode_ == CurveMode::Graph ? 1 : 0); a < coords.size(); ++a) {
    auto& p = coords[a];
    double mean = 0.0;
    for (double v : p) mean += v;
    mean /= static_cast<double>(p.size());
    if (mean >= -std::numbers::pi && mean < 3.0 * std::numbers::pi) continue;
    const double shift = kTwoPi * std::floor((mean + std::numbers::pi) / kTwoPi);
    for (double& v : p) v -= shift;
  }
  return DiscreteCurve(mode_, std::move(coords), winding_);
}

// ---------------------------------------------------------------------------

double CurveGeometry::max_curvature() const {
  double v = 0.0;
  for (double a : curvature_norm) v = std::max(v, a);
  return v;
}

double CurveGeometry::min_theta() const {
  return *std::min_element(theta.begin(), theta.end());
}

double CurveGeometry::min_theta_hat() const {
  return *std::min_element(theta_hat.begin(), theta_hat.end());
}

double CurveGeometry::curvature_energy() const {
  double s = 0.0;
  for (int j = 0; j < size(); ++j) s += curvature_norm[j] * curvature_norm[j] * speed[j];
  return s * kTwoPi / size();
}

CurveGeometry analyze(const DiscreteCurve& c, const WarpedProduct& m) {
  if (c.base_dim() != m.base_dim()) throw Error(ErrorCode::InvalidArgument, "curve and manifold dimensions differ");
  const int n = c.size();
  const int d = c.dim();

  std::vector<std::vector<double>> d1(d, std::vector<double>(n, 0.0)), d2(d, std::vector<double>(n, 0.0));
  for (int a = 0; a < d; ++a) {
    if (a == 0 && c.mode() == CurveMode::Graph) continue;  // r = u exactly
    spectral::differentiate(c.periodic(a), d1[a], d2[a]);
  }

  CurveGeometry g;
  g.local.reserve(n);
  g.velocity.resize(n);
  g.speed.resize(n);
  g.tangent.resize(n);
  std::vector<TangentVec> accel(n);
  for (int j = 0; j < n; ++j) {
    g.local.push_back(m.local_at(c.point(j)));
    TangentVec v(d), acc(d);
    for (int a = 0; a < d; ++a) {
      v(a) = c.winding(a) + d1[a][j];
      acc(a) = d2[a][j];
    }
    const double sigma = std::sqrt(v.dot(g.local[j].metric.g * v));
    if (!(sigma > kImmersionFloor))
      throw Error(ErrorCode::Immersion, "curve is not immersed at node " + std::to_string(j));
    g.velocity[j] = v;
    g.speed[j] = sigma;
    g.tangent[j] = v / sigma;
    accel[j] = acc;
  }

  const std::vector<double> dspeed = spectral::derivative(g.speed);
  g.curvature.resize(n);
  g.curvature_norm.resize(n);
  g.tangential_defect.resize(n);
  g.theta.resize(n);
  g.theta_hat.resize(n);
  double len = 0.0;
  for (int j = 0; j < n; ++j) {
    const Mat& G = g.local[j].metric.g;
    const TangentVec& v = g.velocity[j];
    const double s = g.speed[j];
    // d^2 gamma/ds^2 + Gamma(T, T), with d/ds = (1/sigma) d/du
    TangentVec h = (accel[j] + g.local[j].christoffel.contract(v, v)) / (s * s) - v * (dspeed[j] / (s * s * s));
    const double defect = h.dot(G * g.tangent[j]);
    h -= defect * g.tangent[j];
    g.tangential_defect[j] = defect;
    g.curvature[j] = h;
    g.curvature_norm[j] = std::sqrt(std::max(0.0, h.dot(G * h)));
    g.theta[j] = G.row(0).dot(g.tangent[j]);
    g.theta_hat[j] = g.theta[j] / std::sqrt(G(0, 0));
    len += s;
  }
  g.length = len * kTwoPi / n;
  return g;
}

// ---------------------------------------------------------------------------

DiscreteCurve make_graph_curve(std::span<const FourierField> f, int m, const GraphOptions& opts) {
  check_node_count(m);
  if (f.empty() || static_cast<int>(f.size()) > kMaxBaseDim)
    throw Error(ErrorCode::InvalidArgument, "graph needs 1 or 2 component functions");
  std::vector<int> winding = opts.winding;
  if (winding.empty()) winding.assign(f.size(), 0);
  if (winding.size() != f.size()) throw Error(ErrorCode::InvalidArgument, "winding size mismatch");
  if (!opts.allow_winding)
    for (int w : winding)
      if (w != 0) throw Error(ErrorCode::InvalidArgument, "winding graphs are disabled; enable allow_winding");
  std::vector<std::vector<double>> samples;
  for (const auto& fi : f) {
    if (fi.dim() != 1) throw Error(ErrorCode::InvalidArgument, "graph components must be fields on S^1");
    std::vector<double> s(m);
    for (int j = 0; j < m; ++j) s[j] = fi.value(kTwoPi * j / m);
    samples.push_back(std::move(s));
  }
  return DiscreteCurve::graph_from_samples(std::move(samples), std::move(winding));
}

DiscreteCurve make_graph_curve(const FourierField& f, int m, const GraphOptions& opts) {
  return make_graph_curve(std::span<const FourierField>(&f, 1), m, opts);
}

CurveField<TangentVec> unit_tangent(const DiscreteCurve& c, const WarpedProduct& m) { return analyze(c, m).tangent; }

std::pair<CurveField<TangentVec>, CurveField<double>> mean_curvature(const DiscreteCurve& c, const WarpedProduct& m) {
  CurveGeometry g = analyze(c, m);
  return {std::move(g.curvature), std::move(g.curvature_norm)};
}

std::pair<CurveField<double>, CurveField<double>> angle_function(const DiscreteCurve& c, const WarpedProduct& m) {
  CurveGeometry g = analyze(c, m);
  return {std::move(g.theta), std::move(g.theta_hat)};
}

double length(const DiscreteCurve& c, const WarpedProduct& m) { return analyze(c, m).length; }

CurveField<double> arc_derivative(std::span<const double> eta, const CurveGeometry& g) {
  if (static_cast<int>(eta.size()) != g.size()) throw Error(ErrorCode::InvalidArgument, "field length mismatch");
  std::vector<double> d = spectral::derivative(eta);
  for (int j = 0; j < g.size(); ++j) d[j] /= g.speed[j];
  return d;
}

CurveField<double> arc_derivative(std::span<const double> eta, const DiscreteCurve& c, const WarpedProduct& m) {
  return arc_derivative(eta, analyze(c, m));
}

CurveField<double> arc_laplacian(std::span<const double> eta, const CurveGeometry& g) {
  const std::vector<double> first = arc_derivative(eta, g);
  return arc_derivative(first, g);
}

CurveField<double> arc_laplacian(std::span<const double> eta, const DiscreteCurve& c, const WarpedProduct& m) {
  return arc_laplacian(eta, analyze(c, m));
}

Graphicality graphicality(const DiscreteCurve& c, const WarpedProduct& m) {
  bool monotone = c.winding(0) == 1;
  for (int j = 0; j < c.size() && monotone; ++j) {
    const double next = j + 1 < c.size() ? c.lifted(0, j + 1) : c.lifted(0, 0) + kTwoPi;
    monotone = next > c.lifted(0, j);
  }
  try {
    const CurveGeometry g = analyze(c, m);
    const double lo = g.min_theta_hat();
    return {lo, monotone && lo > 0.0};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Immersion) throw;
    return {0.0, false};
  }
}

DiscreteCurve resample(const DiscreteCurve& c, int m_new) {
  if (c.mode() != CurveMode::Graph) throw Error(ErrorCode::InvalidArgument, "only graph-mode curves can be resampled");
  check_node_count(m_new);
  std::vector<std::vector<double>> base;
  for (int a = 1; a < c.dim(); ++a) base.push_back(spectral::interpolate(c.periodic(a), m_new));
  std::vector<int> w(c.windings().begin() + 1, c.windings().end());
  return DiscreteCurve::graph_from_samples(std::move(base), std::move(w));
}

}  // namespace wcsf
