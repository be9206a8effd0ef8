#pragma once

#include <array>
#include <span>
#include <vector>

#include "wcsf/fourier.hpp"
#include "wcsf/types.hpp"

namespace wcsf {

enum class WarpKind { Left, Right };

// A point of S^1 x T^n. Coordinates are stored reduced mod 2pi.
class WarpPoint {
 public:
  WarpPoint(double r, std::span<const double> x);
  WarpPoint(double r, double x1) : WarpPoint(r, std::span<const double>(&x1, 1)) {}

  double r() const noexcept { return r_; }
  int base_dim() const noexcept { return n_; }
  double x(int i) const { return x_[i]; }
  std::span<const double> base() const noexcept { return {x_.data(), static_cast<std::size_t>(n_)}; }
  // (r, x_1..x_n)
  Vec coords() const;

 private:
  double r_;
  int n_;
  std::array<double, kMaxBaseDim> x_{};
};

// Metric g on the base torus T^n: flat, or entries g11 (n=1) / g11, g12, g22 (n=2)
// given as Fourier fields.
class BaseMetric {
 public:
  struct Jet {
    Mat g;
    Mat inv;
    std::array<Mat, kMaxBaseDim> dg;  // dg[k](i, j) = d g_ij / d x_k
  };

  static BaseMetric flat(int n);
  // Rejects entries that are not positive definite on a 1024-point grid.
  static BaseMetric fourier(int n, std::vector<FourierField> entries);

  int dim() const noexcept { return n_; }
  bool is_flat() const noexcept { return entries_.empty(); }
  const std::vector<FourierField>& entries() const noexcept { return entries_; }
  Jet eval(std::span<const double> x) const;

 private:
  int n_ = 1;
  std::vector<FourierField> entries_;
};

struct MetricTensor {
  Mat g;
  Mat inv;
};

// gamma[a](b, c) = Gamma^a_{bc}; both (b, c) and (c, b) hold the same stored value.
struct ChristoffelTensor {
  int dim = 0;
  std::array<Mat, kMaxDim> gamma;

  double operator()(int a, int b, int c) const { return gamma[a](b, c); }
  // Gamma^a_{bc} u^b v^c
  Vec contract(const Vec& u, const Vec& v) const;
};

// Left: grad is D(log psi) (zero r-component), dlog = d2log = 0.
// Right: grad is the g_R-gradient (log phi)' d_r, with dlog = (log phi)', d2log = (log phi)''.
struct WarpGradient {
  TangentVec grad;
  double dlog = 0.0;
  double d2log = 0.0;
};

// Everything the curve operators need at one point, evaluated in one pass.
struct LocalGeometry {
  MetricTensor metric;
  ChristoffelTensor christoffel;
  WarpGradient warp;
  double warp_value = 1.0;  // psi(x) or phi(r)
};

// S^1 x T^n with g_L = g + psi(x)^2 dr^2 (Left) or g_R = phi(r)^2 g + dr^2 (Right).
// Coordinate index 0 is r, indices 1..n are the base coordinates.
class WarpedProduct {
 public:
  static WarpedProduct left(FourierField psi, BaseMetric base);
  static WarpedProduct right(FourierField phi, BaseMetric base);

  WarpKind kind() const noexcept { return kind_; }
  int base_dim() const noexcept { return base_.dim(); }
  int dim() const noexcept { return base_.dim() + 1; }
  const FourierField& warp() const noexcept { return warp_; }
  const BaseMetric& base() const noexcept { return base_; }

  LocalGeometry local_at(const WarpPoint& p) const;

 private:
  WarpedProduct(WarpKind kind, FourierField warp, BaseMetric base);

  WarpKind kind_;
  FourierField warp_;
  BaseMetric base_;
};

MetricTensor metric_at(const WarpedProduct& m, const WarpPoint& p);
ChristoffelTensor christoffel_at(const WarpedProduct& m, const WarpPoint& p);
double inner(const WarpedProduct& m, const WarpPoint& p, const TangentVec& u, const TangentVec& v);
WarpGradient warp_gradient(const WarpedProduct& m, const WarpPoint& p);

// d_r as a coordinate vector of the manifold's dimension.
TangentVec dr_vector(int dim);

// |<Y, nabla_X d_r> - closed form|, the closed form being the Left or Right
// expression for the covariant derivative of d_r.
double dr_identity_residual(const WarpedProduct& m, const WarpPoint& p, const TangentVec& x, const TangentVec& y);

// max_a |(nabla_X (phi d_r))^a - phi' X^a|. Right manifolds only.
double conformal_residual(const WarpedProduct& m, const WarpPoint& p, const TangentVec& x);

}  // namespace wcsf
