#pragma once

#include <span>
#include <utility>
#include <vector>

#include "wcsf/fourier.hpp"
#include "wcsf/geometry.hpp"

namespace wcsf {

enum class CurveMode { Graph, Parametric };

template <typename T>
using CurveField = std::vector<T>;

struct GraphOptions {
  // Winding of each base component around T^n; nonzero requires allow_winding.
  std::vector<int> winding;
  bool allow_winding = false;
};

// A closed curve sampled at u_j = 2pi j/M. Each coordinate a = 0..n is stored
// as a lift w_a u + p_a(u) with integer winding w_a and periodic samples p_a.
// In graph mode the r-coordinate is exactly u (w_0 = 1, p_0 = 0) and never moves.
class DiscreteCurve {
 public:
  static constexpr int kMinNodes = 32;

  static DiscreteCurve graph_from_samples(std::vector<std::vector<double>> base_periodic, std::vector<int> winding);
  // coords[0] is the periodic part of r; winding[0] is usually 1.
  static DiscreteCurve parametric(std::vector<std::vector<double>> coords, std::vector<int> winding);

  CurveMode mode() const noexcept { return mode_; }
  int size() const noexcept { return m_; }
  int base_dim() const noexcept { return static_cast<int>(periodic_.size()) - 1; }
  int dim() const noexcept { return static_cast<int>(periodic_.size()); }
  int winding(int a) const { return winding_[a]; }
  const std::vector<int>& windings() const noexcept { return winding_; }
  std::span<const double> periodic(int a) const { return periodic_[a]; }
  const std::vector<std::vector<double>>& periodic_parts() const noexcept { return periodic_; }

  double param(int j) const noexcept { return kTwoPi * j / m_; }
  double lifted(int a, int j) const { return winding_[a] * param(j) + periodic_[a][j]; }
  WarpPoint point(int j) const;

  // Same mode and winding with new periodic parts; shifts each base lift by a
  // whole multiple of 2pi when its mean leaves [-pi, 3pi).
  DiscreteCurve with_periodic(std::vector<std::vector<double>> coords) const;

 private:
  DiscreteCurve(CurveMode mode, std::vector<std::vector<double>> periodic, std::vector<int> winding);

  CurveMode mode_;
  int m_;
  std::vector<std::vector<double>> periodic_;
  std::vector<int> winding_;
};

// Per-node geometry of a curve in a warped product, computed in one pass.
struct CurveGeometry {
  std::vector<LocalGeometry> local;
  CurveField<TangentVec> velocity;   // d gamma / du (lifted)
  CurveField<double> speed;          // |gamma'|_G
  CurveField<TangentVec> tangent;    // T
  CurveField<TangentVec> curvature;  // H, projected orthogonal to T
  CurveField<double> curvature_norm; // |A| = |H|_G
  CurveField<double> tangential_defect;  // <H, T> before projection
  CurveField<double> theta;          // <T, d_r>_G
  CurveField<double> theta_hat;      // theta / |d_r|_G
  double length = 0.0;

  int size() const noexcept { return static_cast<int>(speed.size()); }
  double max_curvature() const;
  double min_theta() const;
  double min_theta_hat() const;
  // sum_j |A_j|^2 sigma_j 2pi/M
  double curvature_energy() const;
};

CurveGeometry analyze(const DiscreteCurve& c, const WarpedProduct& m);

DiscreteCurve make_graph_curve(std::span<const FourierField> f, int m, const GraphOptions& opts = {});
DiscreteCurve make_graph_curve(const FourierField& f, int m, const GraphOptions& opts = {});

CurveField<TangentVec> unit_tangent(const DiscreteCurve& c, const WarpedProduct& m);
std::pair<CurveField<TangentVec>, CurveField<double>> mean_curvature(const DiscreteCurve& c, const WarpedProduct& m);
std::pair<CurveField<double>, CurveField<double>> angle_function(const DiscreteCurve& c, const WarpedProduct& m);
double length(const DiscreteCurve& c, const WarpedProduct& m);

// T(eta) = eta'(u) / |gamma'(u)|
CurveField<double> arc_derivative(std::span<const double> eta, const CurveGeometry& g);
CurveField<double> arc_derivative(std::span<const double> eta, const DiscreteCurve& c, const WarpedProduct& m);
// T(T(eta))
CurveField<double> arc_laplacian(std::span<const double> eta, const CurveGeometry& g);
CurveField<double> arc_laplacian(std::span<const double> eta, const DiscreteCurve& c, const WarpedProduct& m);

struct Graphicality {
  double min_theta_hat;
  bool graphical;
};
Graphicality graphicality(const DiscreteCurve& c, const WarpedProduct& m);

DiscreteCurve resample(const DiscreteCurve& c, int m_new);

}  // namespace wcsf
