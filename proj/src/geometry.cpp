#include "wcsf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wcsf/error.hpp"

namespace wcsf {

WarpPoint::WarpPoint(double r, std::span<const double> x) : r_(wrap_angle(r)), n_(static_cast<int>(x.size())) {
  if (n_ < 1 || n_ > kMaxBaseDim) throw Error(ErrorCode::InvalidArgument, "base dimension must be 1 or 2");
  for (int i = 0; i < n_; ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(r)) throw Error(ErrorCode::InvalidArgument, "non-finite coordinate");
    x_[i] = wrap_angle(x[i]);
  }
}

Vec WarpPoint::coords() const {
  Vec c(n_ + 1);
  c(0) = r_;
  for (int i = 0; i < n_; ++i) c(i + 1) = x_[i];
  return c;
}

// ---------------------------------------------------------------------------

BaseMetric BaseMetric::flat(int n) {
  if (n < 1 || n > kMaxBaseDim) throw Error(ErrorCode::InvalidArgument, "base dimension must be 1 or 2");
  BaseMetric b;
  b.n_ = n;
  return b;
}

BaseMetric BaseMetric::fourier(int n, std::vector<FourierField> entries) {
  BaseMetric b = flat(n);
  const std::size_t expected = n == 1 ? 1 : 3;
  if (entries.size() != expected)
    throw Error(ErrorCode::InvalidArgument, "base metric needs " + std::to_string(expected) + " entries");
  for (const auto& e : entries)
    if (e.dim() != n) throw Error(ErrorCode::InvalidArgument, "base metric entry has the wrong dimension");
  b.entries_ = std::move(entries);
  bool ok = true;
  b.entries_.front().for_each_grid_point(1024, [&](std::span<const double> x) {
    const Jet j = b.eval(x);
    if (n == 1) {
      ok = ok && j.g(0, 0) > 0.0;
    } else {
      ok = ok && j.g(0, 0) > 0.0 && j.g.determinant() > 0.0;
    }
  });
  if (!ok) throw Error(ErrorCode::NotPositive, "base metric not positive definite");
  return b;
}

BaseMetric::Jet BaseMetric::eval(std::span<const double> x) const {
  Jet out;
  out.g = Mat::Identity(n_, n_);
  for (auto& d : out.dg) d = Mat::Zero(n_, n_);
  if (is_flat()) {
    out.inv = out.g;
    return out;
  }
  // entry e maps to (i, j) = (0,0) | (0,0),(0,1),(1,1)
  static constexpr std::array<std::array<int, 2>, 3> slots{{{0, 0}, {0, 1}, {1, 1}}};
  for (std::size_t e = 0; e < entries_.size(); ++e) {
    const FieldJet fj = entries_[e].jet(x);
    const auto [i, j] = slots[e];
    out.g(i, j) = out.g(j, i) = fj.value;
    for (int k = 0; k < n_; ++k) out.dg[k](i, j) = out.dg[k](j, i) = fj.grad(k);
  }
  out.inv = out.g.inverse();
  return out;
}

// ---------------------------------------------------------------------------

Vec ChristoffelTensor::contract(const Vec& u, const Vec& v) const {
  Vec out(dim);
  for (int a = 0; a < dim; ++a) out(a) = u.dot(gamma[a] * v);
  return out;
}

WarpedProduct::WarpedProduct(WarpKind kind, FourierField warp, BaseMetric base)
    : kind_(kind), warp_(std::move(warp)), base_(std::move(base)) {
  const int warp_dim = kind == WarpKind::Left ? base_.dim() : 1;
  if (warp_.dim() != warp_dim) throw Error(ErrorCode::InvalidArgument, "warp field has the wrong dimension");
  if (!(warp_.grid_min(1024) > 0.0)) throw Error(ErrorCode::NotPositive, "warp not positive");
}

WarpedProduct WarpedProduct::left(FourierField psi, BaseMetric base) {
  return WarpedProduct(WarpKind::Left, std::move(psi), std::move(base));
}

WarpedProduct WarpedProduct::right(FourierField phi, BaseMetric base) {
  return WarpedProduct(WarpKind::Right, std::move(phi), std::move(base));
}

LocalGeometry WarpedProduct::local_at(const WarpPoint& p) const {
  const int n = base_dim();
  const int d = n + 1;
  if (p.base_dim() != n) throw Error(ErrorCode::InvalidArgument, "point dimension does not match manifold");
  const BaseMetric::Jet b = base_.eval(p.base());

  LocalGeometry out;
  MetricTensor& mt = out.metric;
  ChristoffelTensor& ch = out.christoffel;
  mt.g = Mat::Zero(d, d);
  mt.inv = Mat::Zero(d, d);
  ch.dim = d;
  for (int a = 0; a < d; ++a) ch.gamma[a] = Mat::Zero(d, d);

  // Base Christoffels Gamma^i_{jk} = 1/2 g^{il}(d_j g_lk + d_k g_lj - d_l g_jk), shared by both kinds.
  if (!base_.is_flat()) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = j; k < n; ++k) {
          double s = 0.0;
          for (int l = 0; l < n; ++l) s += b.inv(i, l) * (b.dg[j](l, k) + b.dg[k](l, j) - b.dg[l](j, k));
          ch.gamma[i + 1](j + 1, k + 1) = ch.gamma[i + 1](k + 1, j + 1) = 0.5 * s;
        }
  }

  out.warp.grad = TangentVec::Zero(d);
  if (kind_ == WarpKind::Left) {
    const FieldJet psi = warp_.jet(p.base());
    const double v = psi.value;
    out.warp_value = v;
    mt.g(0, 0) = v * v;
    mt.inv(0, 0) = 1.0 / (v * v);
    mt.g.bottomRightCorner(n, n) = b.g;
    mt.inv.bottomRightCorner(n, n) = b.inv;
    // Gamma^0_{0k} = d_k log psi, Gamma^i_{00} = -g^{ik} psi d_k psi; the rest of the warp block vanishes.
    for (int k = 0; k < n; ++k) ch.gamma[0](0, k + 1) = ch.gamma[0](k + 1, 0) = psi.grad(k) / v;
    const Vec raised = b.inv * psi.grad;
    for (int i = 0; i < n; ++i) {
      ch.gamma[i + 1](0, 0) = -v * raised(i);
      out.warp.grad(i + 1) = raised(i) / v;
    }
  } else {
    const FieldJet phi = warp_.jet(p.r());
    const double v = phi.value;
    const double dv = phi.grad(0);
    const double d2v = phi.hess(0, 0);
    out.warp_value = v;
    mt.g(0, 0) = 1.0;
    mt.inv(0, 0) = 1.0;
    mt.g.bottomRightCorner(n, n) = v * v * b.g;
    mt.inv.bottomRightCorner(n, n) = b.inv / (v * v);
    // From g_R = phi^2 g + dr^2:
    //   Gamma^0_{ij} = -phi phi' g_ij,  Gamma^i_{0j} = (log phi)' delta^i_j,
    //   Gamma^0_{00} = Gamma^0_{0i} = Gamma^i_{00} = 0,
    //   Gamma^i_{jk} = base Christoffels (the phi^2 factor cancels).
    const double dlog = dv / v;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) ch.gamma[0](i + 1, j + 1) = -v * dv * b.g(i, j);
      ch.gamma[i + 1](0, i + 1) = ch.gamma[i + 1](i + 1, 0) = dlog;
    }
    out.warp.dlog = dlog;
    out.warp.d2log = d2v / v - dlog * dlog;
    out.warp.grad(0) = dlog;
  }
  return out;
}

// ---------------------------------------------------------------------------

MetricTensor metric_at(const WarpedProduct& m, const WarpPoint& p) { return m.local_at(p).metric; }

ChristoffelTensor christoffel_at(const WarpedProduct& m, const WarpPoint& p) { return m.local_at(p).christoffel; }

double inner(const WarpedProduct& m, const WarpPoint& p, const TangentVec& u, const TangentVec& v) {
  return u.dot(metric_at(m, p).g * v);
}

WarpGradient warp_gradient(const WarpedProduct& m, const WarpPoint& p) { return m.local_at(p).warp; }

TangentVec dr_vector(int dim) {
  TangentVec e = TangentVec::Zero(dim);
  e(0) = 1.0;
  return e;
}

namespace {

// (nabla_X d_r)^a = Gamma^a_{b0} X^b for the constant-coefficient field d_r.
Vec nabla_dr(const ChristoffelTensor& ch, const Vec& x) {
  Vec out(ch.dim);
  for (int a = 0; a < ch.dim; ++a) out(a) = ch.gamma[a].col(0).dot(x);
  return out;
}

void check_dims(const WarpedProduct& m, const TangentVec& v) {
  if (v.size() != m.dim()) throw Error(ErrorCode::InvalidArgument, "tangent vector dimension mismatch");
  if (!v.allFinite()) throw Error(ErrorCode::InvalidArgument, "non-finite tangent vector");
}

}  // namespace

double dr_identity_residual(const WarpedProduct& m, const WarpPoint& p, const TangentVec& x, const TangentVec& y) {
  check_dims(m, x);
  check_dims(m, y);
  const LocalGeometry loc = m.local_at(p);
  const Mat& g = loc.metric.g;
  const TangentVec dr = dr_vector(m.dim());
  const double lhs = y.dot(g * nabla_dr(loc.christoffel, x));
  double rhs;
  if (m.kind() == WarpKind::Left) {
    const TangentVec& dlog = loc.warp.grad;
    rhs = x.dot(g * dlog) * y.dot(g * dr) - x.dot(g * dr) * y.dot(g * dlog);
  } else {
    rhs = loc.warp.dlog * (x.dot(g * y) - x.dot(g * dr) * y.dot(g * dr));
  }
  return std::abs(lhs - rhs);
}

double conformal_residual(const WarpedProduct& m, const WarpPoint& p, const TangentVec& x) {
  if (m.kind() != WarpKind::Right)
    throw Error(ErrorCode::WrongManifold, "conformal residual is defined on right warped products only");
  check_dims(m, x);
  const LocalGeometry loc = m.local_at(p);
  const double phi = loc.warp_value;
  const double dphi = loc.warp.dlog * phi;
  // nabla_X (phi d_r) = X(phi) d_r + phi nabla_X d_r, with X(phi) = X^0 phi'
  Vec lhs = phi * nabla_dr(loc.christoffel, x);
  lhs(0) += x(0) * dphi;
  return (lhs - dphi * x).cwiseAbs().maxCoeff();
}

}  // namespace wcsf
