#pragma once

#include <string_view>

#include "wcsf/fourier.hpp"

namespace wcsf {

// Parses a scalar field on the dim-torus written as an arithmetic expression.
//
//   0.5*sin            0.3*sin(r) - 0.1*cos(2*r)      exp(0.3*cos(x))
//   1 + 0.2*cos(x1 - x2)                               2^0.5 * sin(3x)
//
// Variables: x, r, u (dim 1); x1, x2 or x, y (dim 2). A bare `sin`/`cos`
// means sin/cos of the first variable. Functions: sin cos exp sqrt log.
// Linear combinations of sin/cos with integer frequencies become exact Fourier
// modes; anything else is projected onto modes |k| <= bandwidth.
// Throws Error(ErrorCode::Parse).
FourierField parse_field(std::string_view text, int dim, int bandwidth = 32);

}  // namespace wcsf
