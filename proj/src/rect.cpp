#include "graspkit/rect.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "graspkit/errors.hpp"

namespace graspkit {

using std::numbers::pi;

double normalize_grasp_angle(double theta) {
  double t = std::fmod(theta + pi / 2, pi);
  if (t < 0) t += pi;
  t -= pi / 2;
  if (t >= pi / 2) t -= pi;
  if (t < -pi / 2) t = -pi / 2;
  return t;
}

double grasp_angle_difference(double a, double b) {
  double d = std::fmod(std::abs(a - b), pi);
  if (d > pi / 2) d = pi - d;
  return d;
}

GraspRect5 make_rect5(double x, double y, double theta, double w, double h) {
  if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(theta) || !std::isfinite(w) || !std::isfinite(h)) {
    throw Error(ErrorCode::kInvalidArgument, "grasp rectangle fields must be finite");
  }
  if (!(w > 0.0) || !(h > 0.0)) throw Error(ErrorCode::kInvalidArgument, "grasp rectangle needs w > 0 and h > 0");
  return {x, y, normalize_grasp_angle(theta), w, h};
}

GraspRect8 rect5_to_corners(const GraspRect5& r) {
  const Vec2 c{r.x, r.y};
  const Vec2 u{std::cos(r.theta), std::sin(r.theta)};
  const Vec2 v{-u.y, u.x};
  const Vec2 a = (r.w / 2) * u;
  const Vec2 b = (r.h / 2) * v;
  return {{c - a - b, c + a - b, c + a + b, c - a + b}};
}

double signed_area(const GraspRect8& c) {
  double s = 0.0;
  for (std::size_t i = 0; i < 4; ++i) s += cross(c.corners[i], c.corners[(i + 1) % 4]);
  return s / 2;
}

GraspRect8 to_ccw(const GraspRect8& c) {
  if (signed_area(c) >= 0.0) return c;
  return {{c.corners[1], c.corners[0], c.corners[3], c.corners[2]}};
}

double first_edge_angle(const GraspRect8& c) {
  const Vec2 e = c.corners[1] - c.corners[0];
  return normalize_grasp_angle(std::atan2(e.y, e.x));
}

GraspRect5 corners_to_rect5(const GraspRect8& input, double tol_rect) {
  const GraspRect8 c = to_ccw(input);
  const auto& p = c.corners;
  const double e0 = norm(p[1] - p[0]), e1 = norm(p[2] - p[1]);
  const double e2 = norm(p[3] - p[2]), e3 = norm(p[0] - p[3]);
  const double d0 = norm(p[2] - p[0]), d1 = norm(p[3] - p[1]);
  const double scale = std::max({e0, e1, e2, e3});
  if (!(scale > 0.0) || std::abs(signed_area(c)) < 1e-12) {
    throw Error(ErrorCode::kDegeneratePolygon, "rectangle has zero area");
  }
  const double tol = tol_rect * scale;
  if (std::abs(e0 - e2) > tol || std::abs(e1 - e3) > tol || std::abs(d0 - d1) > tol) {
    throw Error(ErrorCode::kNotARectangle, "opposite sides or diagonals differ beyond tolerance");
  }
  const Vec2 center = 0.25 * (p[0] + p[1] + p[2] + p[3]);
  return {center.x, center.y, first_edge_angle(c), (e0 + e2) / 2, (e1 + e3) / 2};
}

}  // namespace graspkit
