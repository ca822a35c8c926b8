#pragma once

#include <span>
#include <vector>

#include "graspkit/vec.hpp"

namespace graspkit {

/// Shoelace area, positive for CCW input.
double signed_area(std::span<const Vec2> poly);

/// Sutherland-Hodgman clip of `subject` by the convex CCW polygon `clip`.
/// Points on a clip edge count as inside.
std::vector<Vec2> clip_convex(std::span<const Vec2> subject, std::span<const Vec2> clip);

/// Area of the intersection of two convex polygons (either winding).
/// Symmetric in its arguments bit for bit. Throws DegeneratePolygon when either
/// input has area below 1e-12.
double polygon_intersection_area(std::span<const Vec2> a, std::span<const Vec2> b);

/// Whether the polygon is convex (collinear vertices allowed) and non-degenerate.
bool is_convex(std::span<const Vec2> poly);

}  // namespace graspkit
