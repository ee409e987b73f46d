#pragma once

// Support-polygon geometry for the static stability oracle.

#include "stackplace/spatial.hpp"

#include <span>
#include <vector>

namespace stackplace {

/// Counter-clockwise convex hull without collinear points (monotone chain).
std::vector<Vec2> convex_hull(std::span<const Vec2> points);

/// Smallest signed distance from p to the edges of a CCW convex polygon,
/// positive inside. Degenerate hulls (fewer than 3 vertices) yield minus the
/// distance to the nearest vertex or segment, so p is never "inside" them.
double support_margin(std::span<const Vec2> hull_ccw, const Vec2& p);

/// True iff `com` lies inside the hull of `patch` shrunk by `margin`. A patch
/// with collinear points never supports.
bool patch_supports(std::span<const Vec2> patch, const Vec2& com, double margin);

}  // namespace stackplace
