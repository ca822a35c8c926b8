#pragma once
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <doctest.h>
#include "graspkit/vec.hpp"
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "graspkit/rect.hpp"
#include "oracles/raster_iou.hpp"

namespace testsupport {

inline std::filesystem::path data_dir() { return GRASPKIT_TEST_DATA; }

// Fresh directory under the build tree, removed first if present.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const std::filesystem::path p = std::filesystem::path(GRASPKIT_TEST_SCRATCH) / name;
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline std::vector<oracle::P2> to_oracle(const graspkit::GraspRect8& r) {
  std::vector<oracle::P2> out;
  for (const auto& c : r.corners) out.push_back({c.x, c.y});
  return out;
}

inline graspkit::GraspRect5 random_rect(std::mt19937_64& g, double center_span = 100.0) {
  std::uniform_real_distribution<double> c(0.0, center_span), th(-M_PI / 2, M_PI / 2), sz(5.0, 80.0);
  return graspkit::make_rect5(c(g), c(g), th(g), sz(g), sz(g));
}

inline double angle_between(double ax, double ay, double az, double bx, double by, double bz) {
  const double d = ax * bx + ay * by + az * bz;
  const double na = std::sqrt(ax * ax + ay * ay + az * az), nb = std::sqrt(bx * bx + by * by + bz * bz);
  return std::acos(std::clamp(d / (na * nb), -1.0, 1.0));
}

}  // namespace testsupport

namespace doctest {
template <>
struct StringMaker<graspkit::Vec3> {
  static String convert(const graspkit::Vec3& v) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "(%.17g, %.17g, %.17g)", v.x, v.y, v.z);
    return buf;
  }
};
}  // namespace doctest
