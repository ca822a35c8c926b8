#pragma once

// Grasp rectangles on the image plane.
//
// Coordinates are pixels with x = column and y = row. Angles are measured from
// the +x axis toward +y (counter-clockwise in a y-up drawing, which appears
// clockwise on screen because image rows grow downward). "CCW" below means a
// positive shoelace area in these coordinates.

#include <array>

#include "graspkit/vec.hpp"

namespace graspkit {

/// Center/angle/size form. theta is kept in [-pi/2, pi/2): a grasp rectangle
/// rotated by pi is the same grasp.
struct GraspRect5 {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  double w = 0.0;  ///< extent along the gripper-opening axis
  double h = 0.0;  ///< extent along the jaw axis
};

/// Corner form: four corners, CCW. The first edge (0 -> 1) runs along the
/// opening axis, so its direction carries the grasp angle.
struct GraspRect8 {
  std::array<Vec2, 4> corners{};
};

/// Maps any angle to [-pi/2, pi/2).
double normalize_grasp_angle(double theta);

/// |a - b| taken modulo pi and folded into [0, pi/2].
double grasp_angle_difference(double a, double b);

/// Validated constructor: throws InvalidArgument unless w > 0 and h > 0 and
/// all fields are finite. The angle is normalized.
GraspRect5 make_rect5(double x, double y, double theta, double w, double h);

GraspRect8 rect5_to_corners(const GraspRect5& r);

/// Inverse of rect5_to_corners. Throws NotARectangle when opposite sides or
/// the diagonals differ by more than `tol_rect` relative to the longest side,
/// and DegeneratePolygon for zero-size input.
GraspRect5 corners_to_rect5(const GraspRect8& c, double tol_rect = 1e-6);

/// Signed shoelace area.
double signed_area(const GraspRect8& c);

/// Returns c with CCW winding. A clockwise quad is re-ordered (1, 0, 3, 2),
/// which keeps the first edge on the same segment.
GraspRect8 to_ccw(const GraspRect8& c);

/// Angle of the first edge, normalized.
double first_edge_angle(const GraspRect8& c);

}  // namespace graspkit
