#pragma once

#include <span>
#include <vector>

namespace wcsf::spectral {

// True when m is a power of two >= 2.
bool is_power_of_two(int m);

// First (and optionally second) derivative of a periodic sample vector on the
// uniform grid u_j = 2pi j/M by Fourier multipliers. The Nyquist mode is
// dropped for the first derivative and kept for the second. `d2` may be empty.
void differentiate(std::span<const double> f, std::span<double> d1, std::span<double> d2);

std::vector<double> derivative(std::span<const double> f);

// Trigonometric interpolation of periodic samples onto a uniform grid of m_new nodes.
std::vector<double> interpolate(std::span<const double> f, int m_new);

// Dense evaluation of the trigonometric interpolant at arbitrary parameters.
std::vector<double> evaluate_interpolant(std::span<const double> f, std::span<const double> u);

}  // namespace wcsf::spectral
