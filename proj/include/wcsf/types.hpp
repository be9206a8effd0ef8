#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

namespace wcsf {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Base torus dimension n is 1 or 2, so manifold vectors have at most 3 components.
inline constexpr int kMaxBaseDim = 2;
inline constexpr int kMaxDim = kMaxBaseDim + 1;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

// Components (v^0, v^1..v^n) in the coordinate frame (d_r, d_x1..d_xn).
using TangentVec = Vec;

// Reduce an angle into [0, 2pi).
inline double wrap_angle(double a) {
  double w = std::fmod(a, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

}  // namespace wcsf
