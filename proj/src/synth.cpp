#include "graspkit/synth.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "graspkit/errors.hpp"
#include "graspkit/rng.hpp"

namespace graspkit {
namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, std::string(what) + " must be > 0");
}

PointCloud finish(std::vector<Vec3> local, const RigidPose& pose, const SynthOptions& opt, Rng& rng) {
  for (Vec3& p : local) {
    p = pose.apply(p);
    if (opt.noise_sigma > 0.0) {
      p.x += opt.noise_sigma * rng.normal();
      p.y += opt.noise_sigma * rng.normal();
      p.z += opt.noise_sigma * rng.normal();
    }
  }
  return PointCloud(std::move(local));
}

}  // namespace

void SynthOptions::validate() const {
  require_positive(density, "density");
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw Error(ErrorCode::kInvalidArgument, "noise sigma must be >= 0");
  }
  require_positive(max_opening, "max_opening");
}

SyntheticScene gen_box_scene(double w, double d, double h, const RigidPose& pose, const SynthOptions& opt) {
  require_positive(w, "box width");
  require_positive(d, "box depth");
  require_positive(h, "box height");
  opt.validate();
  Rng rng(opt.seed);
  const double half[3] = {w / 2, d / 2, h / 2};
  std::vector<Vec3> pts;
  for (int axis = 0; axis < 3; ++axis) {
    const int a = (axis + 1) % 3, b = (axis + 2) % 3;
    const double area = 4.0 * half[a] * half[b];
    for (double side : {-1.0, 1.0}) {
      const std::uint64_t n = rng.poisson(opt.density * area);
      for (std::uint64_t i = 0; i < n; ++i) {
        Vec3 p;
        p[axis] = side * half[axis];
        p[a] = rng.uniform(-half[a], half[a]);
        p[b] = rng.uniform(-half[b], half[b]);
        pts.push_back(p);
      }
    }
  }
  int smallest = 0;
  for (int axis = 1; axis < 3; ++axis)
    if (half[axis] < half[smallest]) smallest = axis;
  Vec3 local_axis;
  local_axis[smallest] = 1.0;
  SyntheticScene s{"box", finish(std::move(pts), pose, opt, rng), {}};
  s.truth.center = pose.translation;
  s.truth.axis = pose.rotation * local_axis;
  s.truth.width = 2.0 * half[smallest];
  s.truth.graspable = s.truth.width < opt.max_opening;
  return s;
}

SyntheticScene gen_cylinder_scene(double radius, double length, const RigidPose& pose, const SynthOptions& opt) {
  require_positive(radius, "cylinder radius");
  require_positive(length, "cylinder length");
  opt.validate();
  Rng rng(opt.seed);
  std::vector<Vec3> pts;
  const double two_pi = 2.0 * std::numbers::pi;
  const std::uint64_t n_side = rng.poisson(opt.density * two_pi * radius * length);
  for (std::uint64_t i = 0; i < n_side; ++i) {
    const double phi = rng.uniform(0.0, two_pi);
    pts.push_back({radius * std::cos(phi), radius * std::sin(phi), rng.uniform(-length / 2, length / 2)});
  }
  for (double side : {-1.0, 1.0}) {
    const std::uint64_t n_cap = rng.poisson(opt.density * std::numbers::pi * radius * radius);
    for (std::uint64_t i = 0; i < n_cap; ++i) {
      const double r = radius * std::sqrt(rng.uniform());
      const double phi = rng.uniform(0.0, two_pi);
      pts.push_back({r * std::cos(phi), r * std::sin(phi), side * length / 2});
    }
  }
  SyntheticScene s{"cylinder", finish(std::move(pts), pose, opt, rng), {}};
  s.truth.center = pose.translation;
  s.truth.axis = pose.rotation * Vec3{0, 0, 1};
  s.truth.width = 2.0 * radius;
  s.truth.graspable = s.truth.width < opt.max_opening;
  return s;
}

SyntheticScene gen_plane_patch(double sx, double sy, const RigidPose& pose, const SynthOptions& opt) {
  require_positive(sx, "plane size x");
  require_positive(sy, "plane size y");
  opt.validate();
  Rng rng(opt.seed);
  std::vector<Vec3> pts;
  const std::uint64_t n = rng.poisson(opt.density * sx * sy);
  for (std::uint64_t i = 0; i < n; ++i) pts.push_back({rng.uniform(-sx / 2, sx / 2), rng.uniform(-sy / 2, sy / 2), 0.0});
  SyntheticScene s{"plane", finish(std::move(pts), pose, opt, rng), {}};
  s.truth.center = pose.translation;
  s.truth.axis = pose.rotation * Vec3{0, 0, 1};
  return s;
}

SyntheticScene gen_sphere_scene(double radius, const RigidPose& pose, const SynthOptions& opt) {
  require_positive(radius, "sphere radius");
  opt.validate();
  Rng rng(opt.seed);
  std::vector<Vec3> pts;
  const std::uint64_t n = rng.poisson(opt.density * 4.0 * std::numbers::pi * radius * radius);
  for (std::uint64_t i = 0; i < n; ++i) {
    Vec3 g{rng.normal(), rng.normal(), rng.normal()};
    while (norm(g) < 1e-12) g = {rng.normal(), rng.normal(), rng.normal()};
    pts.push_back(radius * normalized(g));
  }
  SyntheticScene s{"sphere", finish(std::move(pts), pose, opt, rng), {}};
  s.truth.center = pose.translation;
  s.truth.width = 2.0 * radius;
  s.truth.graspable = s.truth.width < opt.max_opening;
  return s;
}

PointCloud concat(const PointCloud& a, const PointCloud& b) {
  std::vector<Vec3> pts = a.points();
  pts.insert(pts.end(), b.points().begin(), b.points().end());
  std::vector<Vec3> normals;
  if (a.has_normals() && b.has_normals()) {
    normals = a.normals();
    normals.insert(normals.end(), b.normals().begin(), b.normals().end());
  }
  return PointCloud(std::move(pts), std::move(normals));
}

}  // namespace graspkit
