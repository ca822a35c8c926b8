#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "graspkit/errors.hpp"
#include "graspkit/metric.hpp"
#include "graspkit/polygon.hpp"
#include "graspkit/rect.hpp"
#include "support.hpp"

using namespace graspkit;

namespace {

bool same_corner_set(const GraspRect8& r, std::initializer_list<Vec2> expected, double tol) {
  for (const Vec2& e : expected) {
    bool found = false;
    for (const Vec2& c : r.corners) found = found || (std::abs(c.x - e.x) <= tol && std::abs(c.y - e.y) <= tol);
    if (!found) return false;
  }
  return true;
}

double angle_gap(double a, double b) { return grasp_angle_difference(a, b); }

}  // namespace

TEST_SUITE("rect") {
  TEST_CASE("angle normalization folds by pi") {
    CHECK(normalize_grasp_angle(0.0) == 0.0);
    CHECK(normalize_grasp_angle(std::numbers::pi / 2) == doctest::Approx(-std::numbers::pi / 2));
    CHECK(normalize_grasp_angle(std::numbers::pi) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(normalize_grasp_angle(-std::numbers::pi / 2) == -std::numbers::pi / 2);
    std::mt19937_64 g(1);
    std::uniform_real_distribution<double> u(-50, 50);
    for (int i = 0; i < 1000; ++i) {
      const double t = normalize_grasp_angle(u(g));
      CHECK(t >= -std::numbers::pi / 2);
      CHECK(t < std::numbers::pi / 2);
    }
  }

  TEST_CASE("angle difference is taken modulo pi and folded") {
    CHECK(angle_gap(0.1, 0.1 + std::numbers::pi) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(angle_gap(0.0, std::numbers::pi / 2) == doctest::Approx(std::numbers::pi / 2));
    CHECK(angle_gap(-1.5, 1.5) == doctest::Approx(std::numbers::pi - 3.0));
  }

  TEST_CASE("make_rect5 validates") {
    CHECK_THROWS_AS(make_rect5(0, 0, 0, 0, 1), Error);
    CHECK_THROWS_AS(make_rect5(0, 0, 0, 1, -1), Error);
    CHECK_THROWS_AS(make_rect5(NAN, 0, 0, 1, 1), Error);
  }

  TEST_CASE("axis-aligned corners") {
    const GraspRect8 c = rect5_to_corners(make_rect5(0, 0, 0, 2, 1));
    CHECK(same_corner_set(c, {{-1, -0.5}, {1, -0.5}, {1, 0.5}, {-1, 0.5}}, 0.0));
    CHECK(signed_area(c) > 0);
  }

  TEST_CASE("quarter-turn corners") {
    const GraspRect8 c = rect5_to_corners(make_rect5(0, 0, std::numbers::pi / 2, 2, 1));
    CHECK(same_corner_set(c, {{0.5, -1}, {0.5, 1}, {-0.5, 1}, {-0.5, -1}}, 1e-15));
    CHECK(signed_area(c) > 0);
  }

  TEST_CASE("rotated corners match the rotation-matrix oracle") {
    // numpy: corners @ R(pi/6)^T + (3, 4)
    const GraspRect8 c = rect5_to_corners(make_rect5(3, 4, std::numbers::pi / 6, 2, 1));
    CHECK(same_corner_set(c,
                          {{2.383974596215561, 3.066987298107781},
                           {4.116025403784438, 4.06698729810778},
                           {3.616025403784439, 4.93301270189222},
                           {1.8839745962155614, 3.9330127018922196}},
                          1e-12));
    const GraspRect5 back = corners_to_rect5(c);
    CHECK(back.x == doctest::Approx(3).epsilon(1e-12));
    CHECK(back.y == doctest::Approx(4).epsilon(1e-12));
    CHECK(back.theta == doctest::Approx(std::numbers::pi / 6).epsilon(1e-12));
    CHECK(back.w == doctest::Approx(2).epsilon(1e-12));
    CHECK(back.h == doctest::Approx(1).epsilon(1e-12));
  }

  TEST_CASE("unit square to rect5") {
    const GraspRect5 r = corners_to_rect5(GraspRect8{{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}}});
    CHECK(r.x == doctest::Approx(0.5));
    CHECK(r.y == doctest::Approx(0.5));
    CHECK(r.theta == doctest::Approx(0.0));
    CHECK(r.w == doctest::Approx(1.0));
    CHECK(r.h == doctest::Approx(1.0));
  }

  TEST_CASE("skewed quad is not a rectangle") {
    CHECK_THROWS_WITH_AS(corners_to_rect5(GraspRect8{{{{0, 0}, {2, 0}, {2, 1}, {0.1, 1}}}}),
                         doctest::Contains("NotARectangle"), Error);
  }

  TEST_CASE("round trip on random rectangles") {
    std::mt19937_64 g(7);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const GraspRect5 r = testsupport::random_rect(g);
      const GraspRect5 b = corners_to_rect5(rect5_to_corners(r));
      worst = std::max({worst, std::abs(b.x - r.x), std::abs(b.y - r.y), std::abs(b.w - r.w), std::abs(b.h - r.h),
                        grasp_angle_difference(b.theta, r.theta)});
    }
    CHECK(worst < 1e-9);
  }

  TEST_CASE("clockwise input is re-wound without moving the first edge") {
    const GraspRect8 cw{{{{0, 0}, {0, 1}, {2, 1}, {2, 0}}}};
    const GraspRect8 ccw = to_ccw(cw);
    CHECK(signed_area(ccw) == doctest::Approx(2.0));
    CHECK(first_edge_angle(ccw) == doctest::Approx(first_edge_angle(cw)));
  }
}

TEST_SUITE("polygon") {
  TEST_CASE("identical and offset squares") {
    const std::vector<Vec2> a{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const std::vector<Vec2> b{{0.5, 0}, {1.5, 0}, {1.5, 1}, {0.5, 1}};
    CHECK(polygon_intersection_area(a, a) == 1.0);
    CHECK(polygon_intersection_area(a, b) == doctest::Approx(0.5).epsilon(1e-15));
  }

  TEST_CASE("square against its 45 degree rotation") {
    const std::vector<Vec2> a{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const double h = std::sqrt(0.5);
    const std::vector<Vec2> b{{0.5, 0.5 - h}, {0.5 + h, 0.5}, {0.5, 0.5 + h}, {0.5 - h, 0.5}};
    const double area = polygon_intersection_area(a, b);
    // Regular octagon 2(sqrt2 - 1); shapely gives 0.82842712474619.
    CHECK(area == doctest::Approx(0.8284271247461903).epsilon(1e-12));
    std::vector<oracle::P2> oa, ob;
    for (auto p : a) oa.push_back({p.x, p.y});
    for (auto p : b) ob.push_back({p.x, p.y});
    // Intersection of two convex polygons rasterized directly.
    const double lo = 0.5 - h, hi = 0.5 + h;
    long in = 0;
    const long n = 2048;
    for (long r = 0; r < n; ++r) {
      const double y = lo + (r + 0.5) * (hi - lo) / n;
      const auto ia = oracle::row_interval(oa, y), ib = oracle::row_interval(ob, y);
      if (!ia || !ib) continue;
      const auto ra = oracle::column_range(std::max(ia->first, ib->first), std::min(ia->second, ib->second), lo,
                                           (hi - lo) / n, n);
      in += std::max(0L, ra.second - ra.first + 1);
    }
    const double raster = static_cast<double>(in) * (hi - lo) * (hi - lo) / (n * n);
    CHECK(std::abs(raster - area) < 2e-3);
  }

  TEST_CASE("symmetric and bounded") {
    std::mt19937_64 g(11);
    for (int i = 0; i < 2000; ++i) {
      const GraspRect8 a = rect5_to_corners(testsupport::random_rect(g));
      const GraspRect8 b = rect5_to_corners(testsupport::random_rect(g));
      const double ab = polygon_intersection_area(a.corners, b.corners);
      const double ba = polygon_intersection_area(b.corners, a.corners);
      CHECK(ab == ba);
      CHECK(ab >= 0.0);
      CHECK(ab <= std::min(signed_area(a), signed_area(b)) * (1 + 1e-12));
    }
  }

  TEST_CASE("degenerate input") {
    const std::vector<Vec2> a{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const std::vector<Vec2> flat{{0, 0}, {1, 0}, {2, 0}, {3, 0}};
    CHECK_THROWS_WITH_AS(polygon_intersection_area(a, flat), doctest::Contains("DegeneratePolygon"), Error);
  }

  TEST_CASE("convexity") {
    CHECK(is_convex(std::vector<Vec2>{{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
    CHECK_FALSE(is_convex(std::vector<Vec2>{{0, 0}, {2, 0}, {0.5, 0.5}, {0, 2}}));
  }
}

TEST_SUITE("metric") {
  TEST_CASE("jaccard basics") {
    const GraspRect8 u = rect5_to_corners(make_rect5(0.5, 0.5, 0, 1, 1));
    const GraspRect8 v = rect5_to_corners(make_rect5(1.0, 0.5, 0, 1, 1));
    const GraspRect8 far = rect5_to_corners(make_rect5(10, 10, 0, 1, 1));
    CHECK(jaccard(u, u) == 1.0);
    CHECK(jaccard(u, far) == 0.0);
    CHECK(jaccard(u, v) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  }

  TEST_CASE("jaccard agrees with the raster oracle") {
    std::mt19937_64 g(3);
    std::uniform_real_distribution<double> off(-30, 30);
    for (int i = 0; i < 200; ++i) {
      const GraspRect5 a = testsupport::random_rect(g);
      GraspRect5 b = testsupport::random_rect(g);
      b.x = a.x + off(g);
      b.y = a.y + off(g);
      const GraspRect8 ca = rect5_to_corners(a), cb = rect5_to_corners(b);
      const double r = oracle::raster_jaccard(testsupport::to_oracle(ca), testsupport::to_oracle(cb));
      CHECK(std::abs(jaccard(ca, cb) - r) < 2e-3);
    }
  }

  TEST_CASE("rigid and scale invariance") {
    std::mt19937_64 g(5);
    std::uniform_real_distribution<double> ang(-3.0, 3.0), t(-500, 500), s(0.1, 10);
    for (int i = 0; i < 1000; ++i) {
      GraspRect5 a = testsupport::random_rect(g, 40), b = testsupport::random_rect(g, 40);
      const double base = jaccard(rect5_to_corners(a), rect5_to_corners(b));
      const double phi = ang(g), tx = t(g), ty = t(g), k = s(g);
      auto rigid = [&](GraspRect5 r) {
        const double x = std::cos(phi) * r.x - std::sin(phi) * r.y + tx;
        const double y = std::sin(phi) * r.x + std::cos(phi) * r.y + ty;
        return make_rect5(x, y, r.theta + phi, r.w, r.h);
      };
      auto scaled = [&](GraspRect5 r) { return make_rect5(k * r.x, k * r.y, r.theta, k * r.w, k * r.h); };
      const double moved = jaccard(rect5_to_corners(rigid(a)), rect5_to_corners(rigid(b)));
      const double sc = jaccard(rect5_to_corners(scaled(a)), rect5_to_corners(scaled(b)));
      CHECK(std::abs(moved - base) <= 1e-9 * std::max(1.0, base));
      CHECK(std::abs(sc - base) <= 1e-12 * std::max(1.0, base));
    }
  }

  TEST_CASE("is_correct_grasp examples") {
    const EvalConfig cfg;
    const std::vector<GraspRect5> truths{make_rect5(0, 0, 0, 60, 30), make_rect5(130, 115, 0, 60, 30)};
    const GraspMatch m = is_correct_grasp(truths[1], truths, cfg);
    CHECK(m.correct);
    CHECK(m.best_iou == 1.0);
    CHECK(m.best_index == std::optional<std::size_t>(1));

    const GraspRect5 turned = make_rect5(130, 115, std::numbers::pi / 2, 60, 30);
    const GraspMatch t = is_correct_grasp(turned, truths, cfg);
    CHECK_FALSE(t.correct);
    CHECK(t.best_iou == doctest::Approx(1.0 / 3.0));

    CHECK_THROWS_WITH_AS(is_correct_grasp(turned, std::span<const GraspRect5>{}, cfg),
                         doctest::Contains("EmptyTruthSet"), Error);
  }

  TEST_CASE("IoU 0.26 at ten degrees passes") {
    // The truth rotated 10 degrees about its center and shifted 32.8 px along
    // x; shapely puts the IoU at 0.260344504247124.
    const GraspRect5 truth = make_rect5(130, 115, 0, 60, 30);
    const GraspRect5 pred = make_rect5(130 + 32.8, 115, 10 * std::numbers::pi / 180, 60, 30);
    const double raster = oracle::raster_jaccard(testsupport::to_oracle(rect5_to_corners(pred)),
                                                 testsupport::to_oracle(rect5_to_corners(truth)));
    CHECK(std::abs(raster - 0.26) <= 0.005);
    const GraspMatch m = is_correct_grasp(pred, std::vector<GraspRect5>{truth}, EvalConfig{});
    CHECK(m.correct);
    CHECK(m.best_iou == doctest::Approx(0.260344504247124).epsilon(1e-12));
  }

  TEST_CASE("threshold monotonicity") {
    std::mt19937_64 g(9);
    std::uniform_real_distribution<double> off(-40, 40);
    for (int i = 0; i < 500; ++i) {
      const GraspRect5 t = testsupport::random_rect(g);
      GraspRect5 p = testsupport::random_rect(g);
      p.x = t.x + off(g);
      p.y = t.y + off(g);
      const std::vector<GraspRect5> truths{t};
      bool prev = true;
      for (double th = 0.05; th <= 1.0; th += 0.05) {
        EvalConfig cfg;
        cfg.jaccard_threshold = th;
        const bool now = is_correct_grasp(p, truths, cfg).correct;
        CHECK((prev || !now));
        prev = now;
      }
    }
  }

  TEST_CASE("tie goes to the lower index") {
    const GraspRect5 t = make_rect5(10, 10, 0, 10, 5);
    const std::vector<GraspRect5> truths{t, t};
    CHECK(is_correct_grasp(t, truths, EvalConfig{}).best_index == std::optional<std::size_t>(0));
  }

  TEST_CASE("eval config validation") {
    EvalConfig c;
    c.jaccard_threshold = 0.0;
    CHECK_THROWS_AS(c.validate(), Error);
    c = EvalConfig{};
    c.angle_threshold = 2.0;
    CHECK_THROWS_AS(c.validate(), Error);
  }

  TEST_CASE("dataset accuracy") {
    std::map<std::string, GraspRect5> preds;
    std::map<std::string, std::vector<GraspRect5>> truths;
    for (int i = 0; i < 5; ++i) {
      const std::string id = std::to_string(i);
      const GraspRect5 t = make_rect5(50 + i, 60, 0.2 * i, 40, 20);
      truths[id] = {make_rect5(300, 300, 0, 10, 10), t};
      preds[id] = t;
    }
    EvalReport all = evaluate_dataset(preds, truths, EvalConfig{});
    CHECK(all.accuracy == 1.0);
    CHECK(all.n_images == 5);
    for (auto& [id, p] : preds) p.x += 1000;
    EvalReport none = evaluate_dataset(preds, truths, EvalConfig{});
    CHECK(none.accuracy == 0.0);
    CHECK_FALSE(none.per_image[0].best_truth.has_value());
    preds["missing"] = make_rect5(0, 0, 0, 1, 1);
    CHECK_THROWS_WITH_AS(evaluate_dataset(preds, truths, EvalConfig{}), doctest::Contains("missing"), Error);
  }
}
