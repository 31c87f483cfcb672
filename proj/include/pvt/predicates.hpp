#pragma once

#include "pvt/core.hpp"

namespace pvt {

// Sign of the signed area of triangle (a, b, c): > 0 for counter-clockwise.
// Filtered double evaluation with an exact rational fallback.
int orient2d(Vec2 a, Vec2 b, Vec2 c);

// Sign of the incircle determinant: > 0 iff d lies strictly inside the
// circumcircle of the CCW triangle (a, b, c).
int incircle(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

}  // namespace pvt
