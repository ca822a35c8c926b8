#include "graspkit/polygon.hpp"

#include <algorithm>
#include <cmath>

#include "graspkit/errors.hpp"

namespace graspkit {
namespace {

constexpr double kMinArea = 1e-12;

std::vector<Vec2> ccw_copy(std::span<const Vec2> poly) {
  std::vector<Vec2> out(poly.begin(), poly.end());
  if (signed_area(out) < 0) std::reverse(out.begin(), out.end());
  return out;
}

bool lexicographically_less(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), [](Vec2 p, Vec2 q) {
    return p.x < q.x || (p.x == q.x && p.y < q.y);
  });
}

}  // namespace

double signed_area(std::span<const Vec2> poly) {
  const std::size_t n = poly.size();
  if (n < 3) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += cross(poly[i], poly[(i + 1) % n]);
  return s / 2;
}

std::vector<Vec2> clip_convex(std::span<const Vec2> subject, std::span<const Vec2> clip) {
  std::vector<Vec2> output(subject.begin(), subject.end());
  std::vector<Vec2> input;
  const std::size_t m = clip.size();
  for (std::size_t j = 0; j < m && !output.empty(); ++j) {
    const Vec2 c0 = clip[j];
    const Vec2 edge = clip[(j + 1) % m] - c0;
    input.swap(output);
    output.clear();
    Vec2 prev = input.back();
    double prev_side = cross(edge, prev - c0);
    for (const Vec2 cur : input) {
      const double cur_side = cross(edge, cur - c0);
      if (cur_side >= 0) {
        if (prev_side < 0) {
          const double t = prev_side / (prev_side - cur_side);
          output.push_back(prev + t * (cur - prev));
        }
        output.push_back(cur);
      } else if (prev_side >= 0) {
        const double t = prev_side / (prev_side - cur_side);
        output.push_back(prev + t * (cur - prev));
      }
      prev = cur;
      prev_side = cur_side;
    }
  }
  return output;
}

double polygon_intersection_area(std::span<const Vec2> a, std::span<const Vec2> b) {
  std::vector<Vec2> pa = ccw_copy(a);
  std::vector<Vec2> pb = ccw_copy(b);
  if (signed_area(pa) < kMinArea || signed_area(pb) < kMinArea) {
    throw Error(ErrorCode::kDegeneratePolygon, "polygon area below 1e-12");
  }
  // Fixed argument order makes the result independent of call order.
  if (lexicographically_less(pb, pa)) std::swap(pa, pb);
  const std::vector<Vec2> inter = clip_convex(pa, pb);
  return std::max(0.0, signed_area(inter));
}

bool is_convex(std::span<const Vec2> poly) {
  const std::size_t n = poly.size();
  if (n < 3 || std::abs(signed_area(poly)) < kMinArea) return false;
  int sign = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = cross(poly[(i + 1) % n] - poly[i], poly[(i + 2) % n] - poly[(i + 1) % n]);
    if (c == 0.0) continue;
    const int s = c > 0 ? 1 : -1;
    if (sign == 0) sign = s;
    else if (s != sign) return false;
  }
  return true;
}

}  // namespace graspkit
