#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "graspkit/camera.hpp"
#include "graspkit/errors.hpp"
#include "graspkit/point_cloud.hpp"
#include "oracles/geometry.hpp"
#include "support.hpp"

using namespace graspkit;

namespace {

RigidPose random_pose(std::mt19937_64& g, double t_span = 1.0) {
  std::normal_distribution<double> n;
  std::uniform_real_distribution<double> a(-std::numbers::pi, std::numbers::pi), t(-t_span, t_span);
  const auto q = oracle::axis_angle_quat({n(g), n(g), n(g)}, a(g));
  const auto m = oracle::quat_matrix(q);
  Mat3 r;
  for (int i = 0; i < 9; ++i) r.m[static_cast<std::size_t>(i)] = m[static_cast<std::size_t>(i)];
  return RigidPose::make(r, {t(g), t(g), t(g)});
}

// Looking down the world -z axis from height h.
RigidPose overhead(double h) {
  Mat3 r{{1, 0, 0, 0, -1, 0, 0, 0, -1}};
  return RigidPose::make(r, {0, 0, h});
}

}  // namespace

TEST_SUITE("camera") {
  TEST_CASE("backprojection examples") {
    const CameraIntrinsics k{500, 500, 320, 240};
    const Vec3 a = backproject_pixel(320, 240, 1, k);
    CHECK(a == Vec3{0, 0, 1});
    const Vec3 b = backproject_pixel(320 + 500, 240, 2, k);
    CHECK(b == Vec3{2, 0, 2});
    const Vec3 c = backproject_pixel(820, 240, 1, k);
    CHECK(c == Vec3{1.0, 0.0, 1.0});
    CHECK_THROWS_WITH_AS(backproject_pixel(1, 1, 0, k), doctest::Contains("NonPositiveDepth"), Error);
    CHECK_THROWS_AS(backproject_pixel(1, 1, -1, k), Error);
  }

  TEST_CASE("intrinsics validation") {
    CHECK_THROWS_AS((CameraIntrinsics{0, 1, 0, 0}.validate()), Error);
    CHECK_THROWS_AS((CameraIntrinsics{1, -1, 0, 0}.validate()), Error);
    CHECK_THROWS_AS((ZBand{1.0, 1.0}.validate()), Error);
    CHECK_THROWS_AS((ZBand{0.0, 1.0}.validate()), Error);
  }

  TEST_CASE("project then backproject") {
    std::mt19937_64 g(1);
    std::uniform_real_distribution<double> xy(-2, 2), z(0.05, 5);
    const CameraIntrinsics k{612.5, 598.25, 321.7, 243.1};
    for (int i = 0; i < 10000; ++i) {
      const Vec3 p{xy(g), xy(g), z(g)};
      const Vec2 uv = project_point(p, k);
      const Vec3 q = backproject_pixel(uv.x, uv.y, p.z, k);
      CHECK(norm(q - p) <= 1e-12 * norm(p));
    }
  }

  TEST_CASE("linearity in the column offset") {
    const CameraIntrinsics k{400, 400, 100, 100};
    const double x1 = backproject_pixel(100 + 37, 80, 1.5, k).x;
    const double x3 = backproject_pixel(100 + 3 * 37, 80, 1.5, k).x;
    CHECK(x3 == doctest::Approx(3 * x1).epsilon(1e-15));
  }

  TEST_CASE("rigid poses") {
    const Vec3 p{0.3, -1.2, 2.5};
    CHECK(camera_to_world(p, RigidPose::identity()) == p);
    const RigidPose t = RigidPose::make(Mat3::identity(), {1, 2, 3});
    CHECK(camera_to_world(p, t) == Vec3{1.3, 0.8, 5.5});
    // Quaternion oracle (and scipy): yaw 90 degrees of (1,0,0) plus (1,2,3) -> (1,3,3).
    const auto q = oracle::axis_angle_quat({0, 0, 1}, std::numbers::pi / 2);
    const auto m = oracle::quat_matrix(q);
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.m[static_cast<std::size_t>(i)] = m[static_cast<std::size_t>(i)];
    const Vec3 w = camera_to_world({1, 0, 0}, RigidPose::make(r, {1, 2, 3}));
    CHECK(w.x == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(w.y == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(w.z == doctest::Approx(3.0).epsilon(1e-15));

    std::mt19937_64 g(2);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int i = 0; i < 1000; ++i) {
      const RigidPose pose = random_pose(g);
      const Vec3 a{u(g), u(g), u(g)};
      CHECK(norm(world_to_camera(camera_to_world(a, pose), pose) - a) <= 1e-12);
      const auto rm = pose.to_row_major();
      const RigidPose again = RigidPose::from_row_major(rm);
      CHECK(again.apply(a) == pose.apply(a));
    }
    Mat3 bad = Mat3::identity();
    bad.m[0] = 1.1;
    CHECK_THROWS_AS(RigidPose::make(bad, {}), Error);
    Mat3 reflect = Mat3::identity();
    reflect.m[0] = -1;
    CHECK_THROWS_AS(RigidPose::make(reflect, {}), Error);
  }

  TEST_CASE("region planes at the band limits") {
    // 100x100 px square on the principal point, f = 100: the near polygon at
    // z = 1 is a 1 m square and the far one at z = 2 a 2 m square.
    const CameraIntrinsics k{100, 100, 320, 240};
    const std::vector<Vec2> sq{{270, 190}, {370, 190}, {370, 290}, {270, 290}};
    const WorldRegion r = project_polygon_region(sq, k, RigidPose::identity(), ZBand{1, 2});
    REQUIRE(r.near_polygon().size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(std::abs(r.near_polygon()[i].x) == doctest::Approx(0.5));
      CHECK(std::abs(r.near_polygon()[i].y) == doctest::Approx(0.5));
      CHECK(r.near_polygon()[i].z == 1.0);
      CHECK(std::abs(r.far_polygon()[i].x) == doctest::Approx(1.0));
      CHECK(r.far_polygon()[i].z == 2.0);
    }
    CHECK(r.contains({0, 0, 1.5}));
    CHECK(r.contains({0.49, 0.49, 1.0}));
    CHECK_FALSE(r.contains({0.51, 0, 1.0}));
    CHECK_FALSE(r.contains({0, 0, 2.01}));
    CHECK_FALSE(r.contains({0, 0, 0.99}));
  }

  TEST_CASE("non-convex polygons are refused") {
    const CameraIntrinsics k{100, 100, 0, 0};
    const std::vector<Vec2> dart{{0, 0}, {10, 0}, {2, 2}, {0, 10}};
    CHECK_THROWS_AS(project_polygon_region(dart, k, RigidPose::identity(), ZBand{1, 2}), Error);
  }

  TEST_CASE("membership equals the projection predicate") {
    std::mt19937_64 g(3);
    const CameraIntrinsics k{500, 480, 320, 240};
    const RigidPose pose = random_pose(g, 0.5);
    const std::vector<Vec2> poly{{200, 150}, {420, 170}, {450, 330}, {260, 360}, {180, 260}};
    const ZBand band{0.8, 1.6};
    const WorldRegion region = project_polygon_region(poly, k, pose, band);
    std::uniform_real_distribution<double> px(100, 540), py(50, 430), z(0.5, 2.0);
    std::vector<Vec3> pts;
    for (int i = 0; i < 100000; ++i) pts.push_back(camera_to_world(backproject_pixel(px(g), py(g), z(g), k), pose));
    std::size_t disagreements = 0, inside = 0;
    for (const Vec3& p : pts) {
      const Vec3 c = world_to_camera(p, pose);
      bool expect = c.z >= band.z_min && c.z <= band.z_max;
      if (expect) {
        const Vec2 uv = project_point(c, k);
        for (std::size_t i = 0; i < poly.size(); ++i) {
          const Vec2 a = poly[i], b = poly[(i + 1) % poly.size()];
          if ((b.x - a.x) * (uv.y - a.y) - (b.y - a.y) * (uv.x - a.x) < 0) expect = false;
        }
      }
      inside += expect;
      disagreements += region.contains(p) != expect;
    }
    CHECK(inside > 10000);
    CHECK(disagreements == 0);
    // select() is the vectorized path of contains().
    const PointCloud cloud(pts);
    const auto sel = region.select(cloud.soa());
    CHECK(sel.size() == inside);
  }

  TEST_CASE("band shrink is monotone") {
    const CameraIntrinsics k{300, 300, 320, 240};
    const std::vector<Vec2> all{{0, 0}, {640, 0}, {640, 480}, {0, 480}};
    std::mt19937_64 g(4);
    std::uniform_real_distribution<double> px(0, 640), py(0, 480), z(0.4, 1.1);
    std::vector<Vec3> pts;
    for (int i = 0; i < 20000; ++i) pts.push_back(backproject_pixel(px(g), py(g), z(g), k));
    const PointCloud cloud(pts);
    std::size_t prev = cloud.size() + 1;
    for (double zmax : {1.0, 0.9, 0.8, 0.7, 0.6}) {
      const WorldRegion r = project_polygon_region(all, k, RigidPose::identity(), ZBand{0.5, zmax});
      const std::size_t n = crop(cloud, r).size();
      CHECK(n <= prev);
      prev = n;
    }
    // Full-image polygon with band (0.5, 1.0) keeps exactly the in-band points.
    const WorldRegion full = project_polygon_region(all, k, RigidPose::identity(), ZBand{0.5, 1.0});
    std::size_t expect = 0;
    for (const Vec3& p : pts) expect += p.z >= 0.5 && p.z <= 1.0;
    CHECK(crop(cloud, full).size() == expect);
  }

  TEST_CASE("transformed region") {
    std::mt19937_64 g(5);
    const CameraIntrinsics k{300, 300, 320, 240};
    const std::vector<Vec2> poly{{250, 200}, {400, 200}, {400, 300}, {250, 300}};
    const WorldRegion r = project_polygon_region(poly, k, overhead(1.0), ZBand{0.5, 1.2});
    const RigidPose t = random_pose(g);
    const WorldRegion moved = r.transformed(t);
    std::uniform_real_distribution<double> u(-0.4, 0.4), zz(-0.3, 0.6);
    int both = 0;
    for (int i = 0; i < 5000; ++i) {
      const Vec3 p{u(g), u(g), zz(g)};
      // Points away from the boundary must agree.
      const bool a = r.contains(p), b = moved.contains(t.apply(p));
      both += a;
      if (a != b) {
        CHECK(false);
      }
    }
    CHECK(both > 0);
  }
}
