#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "wcsf/types.hpp"

namespace wcsf {

// One term a*cos(k.x) + b*sin(k.x) of a real trigonometric polynomial.
struct FourierMode {
  std::array<int, 2> k{0, 0};
  double cos = 0.0;
  double sin = 0.0;
};

// Value, gradient and Hessian of a field at one point.
struct FieldJet {
  double value = 0.0;
  Vec grad;
  Mat hess;
};

// A smooth periodic scalar field on (R/2piZ)^dim, dim in {1, 2}, stored as a
// truncated real Fourier series. Derivatives are taken term by term, so they
// are exact for the stored series.
class FourierField {
 public:
  FourierField() : FourierField(constant(0.0)) {}

  static FourierField constant(double c, int dim = 1);

  // 1-D series sum_k cos_coeffs[k] cos(kx) + sin_coeffs[k] sin(kx). sin_coeffs[0] is ignored.
  static FourierField series(std::span<const double> cos_coeffs, std::span<const double> sin_coeffs);

  static FourierField from_modes(int dim, std::vector<FourierMode> modes);

  // L2 projection of f onto modes |k_i| <= bandwidth using an equispaced grid.
  // Coefficients below 1e-18 relative to the largest are dropped.
  static FourierField project(int dim, const std::function<double(std::span<const double>)>& f,
                              int bandwidth);

  // exp(amplitude * cos(x)) on S^1, projected at the given bandwidth.
  static FourierField exp_cos(double amplitude, int bandwidth = 32);

  int dim() const noexcept { return dim_; }
  int bandwidth() const noexcept { return bandwidth_; }
  bool is_constant() const noexcept { return bandwidth_ == 0; }
  const std::vector<FourierMode>& modes() const noexcept { return modes_; }

  double value(std::span<const double> x) const;
  double value(double x) const { return value(std::span<const double>(&x, 1)); }
  FieldJet jet(std::span<const double> x) const;
  FieldJet jet(double x) const { return jet(std::span<const double>(&x, 1)); }

  // Samples on the tensor grid with `points` total nodes (per-axis sqrt(points) in 2-D).
  double grid_min(int points = 1024) const;
  double grid_max(int points = 1024) const;
  // Applies fn to every node of the grid, in lexicographic order.
  void for_each_grid_point(int points, const std::function<void(std::span<const double>)>& fn) const;

 private:
  FourierField(int dim, std::vector<FourierMode> modes);

  int dim_ = 1;
  int bandwidth_ = 0;
  std::vector<FourierMode> modes_;
};

}  // namespace wcsf
