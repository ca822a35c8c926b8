#include "graspkit/camera.hpp"

#include <cmath>

#include "graspkit/errors.hpp"
#include "graspkit/polygon.hpp"

namespace graspkit {
namespace {

// Must match simd plane_offset_f64 operation for operation.
inline double plane_offset(Vec3 p, Vec3 o, Vec3 n) {
  return n.x * (p.x - o.x) + n.y * (p.y - o.y) + n.z * (p.z - o.z);
}

}  // namespace

void CameraIntrinsics::validate() const {
  if (!std::isfinite(fx) || !std::isfinite(fy) || !std::isfinite(cx) || !std::isfinite(cy)) {
    throw Error(ErrorCode::kInvalidArgument, "camera intrinsics must be finite");
  }
  if (!(fx > 0.0) || !(fy > 0.0)) throw Error(ErrorCode::kInvalidArgument, "focal lengths must be positive");
}

RigidPose RigidPose::make(const Mat3& rotation, Vec3 translation) {
  const Mat3 rtr = rotation.transposed() * rotation;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      if (std::abs(rtr(r, c) - (r == c ? 1.0 : 0.0)) > 1e-9 || !std::isfinite(rotation(r, c))) {
        throw Error(ErrorCode::kInvalidArgument, "rotation is not orthonormal");
      }
  if (std::abs(determinant(rotation) - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidArgument, "rotation determinant is not +1");
  }
  if (!std::isfinite(translation.x) || !std::isfinite(translation.y) || !std::isfinite(translation.z)) {
    throw Error(ErrorCode::kInvalidArgument, "translation must be finite");
  }
  return {rotation, translation};
}

RigidPose RigidPose::from_row_major(std::span<const double, 12> v) {
  return make(Mat3{{v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8]}}, {v[9], v[10], v[11]});
}

std::array<double, 12> RigidPose::to_row_major() const {
  std::array<double, 12> out{};
  for (std::size_t i = 0; i < 9; ++i) out[i] = rotation.m[i];
  out[9] = translation.x;
  out[10] = translation.y;
  out[11] = translation.z;
  return out;
}

RigidPose RigidPose::inverse() const {
  const Mat3 rt = rotation.transposed();
  return {rt, -(rt * translation)};
}

RigidPose operator*(const RigidPose& a, const RigidPose& b) {
  return {a.rotation * b.rotation, a.rotation * b.translation + a.translation};
}

void ZBand::validate() const {
  if (!(z_min > 0.0) || !(z_min < z_max) || !std::isfinite(z_max)) {
    throw Error(ErrorCode::kInvalidArgument, "depth band needs 0 < z_min < z_max");
  }
}

Vec3 backproject_pixel(double u, double v, double zc, const CameraIntrinsics& k) {
  if (!(zc > 0.0)) throw Error(ErrorCode::kNonPositiveDepth, "depth must be positive");
  return {(u - k.cx) * zc / k.fx, (v - k.cy) * zc / k.fy, zc};
}

Vec2 project_point(Vec3 p, const CameraIntrinsics& k) {
  if (!(p.z > 0.0)) throw Error(ErrorCode::kNonPositiveDepth, "point is not in front of the camera");
  return {k.fx * p.x / p.z + k.cx, k.fy * p.y / p.z + k.cy};
}

Vec3 camera_to_world(Vec3 p, const RigidPose& pose) { return pose.apply(p); }
Vec3 world_to_camera(Vec3 p, const RigidPose& pose) { return pose.apply_inverse(p); }

WorldRegion::WorldRegion(std::span<const Vec2> pixel_polygon, const CameraIntrinsics& k, const RigidPose& pose,
                         ZBand band)
    : pixels_(pixel_polygon.begin(), pixel_polygon.end()), pose_(pose), band_(band) {
  k.validate();
  band.validate();
  if (!is_convex(pixels_)) throw Error(ErrorCode::kInvalidArgument, "crop polygon must be convex with >= 3 vertices");
  build(k);
}

void WorldRegion::build(const CameraIntrinsics& k) {
  k_ = k;
  apex_ = pose_.translation;
  axis_ = pose_.rotation.column(2);
  const std::size_t n = pixels_.size();
  std::vector<Vec3> rays(n);
  Vec2 mean{};
  for (std::size_t i = 0; i < n; ++i) {
    rays[i] = pose_.rotation * backproject_pixel(pixels_[i].x, pixels_[i].y, 1.0, k);
    mean = mean + (1.0 / static_cast<double>(n)) * pixels_[i];
  }
  const Vec3 center_ray = pose_.rotation * backproject_pixel(mean.x, mean.y, 1.0, k);
  sides_.clear();
  for (std::size_t i = 0; i < n; ++i) {
    Vec3 normal = cross(rays[i], rays[(i + 1) % n]);
    if (dot(normal, center_ray) < 0) normal = -normal;
    sides_.push_back({normal});
  }
  near_.clear();
  far_.clear();
  for (const Vec2& px : pixels_) {
    near_.push_back(pose_.apply(backproject_pixel(px.x, px.y, band_.z_min, k)));
    far_.push_back(pose_.apply(backproject_pixel(px.x, px.y, band_.z_max, k)));
  }
}

bool WorldRegion::contains(Vec3 p) const {
  const double depth = plane_offset(p, apex_, axis_);
  if (!(depth >= band_.z_min && depth <= band_.z_max)) return false;
  for (const Plane& s : sides_)
    if (!(plane_offset(p, apex_, s.normal) >= 0.0)) return false;
  return true;
}

std::vector<std::size_t> WorldRegion::select(simd::PointsSoA pts) const {
  const simd::Kernels& k = simd::active();
  std::vector<std::size_t> kept;
  constexpr std::size_t kBlock = 1024;
  double values[kBlock];
  bool inside[kBlock];
  for (std::size_t begin = 0; begin < pts.size; begin += kBlock) {
    const std::size_t end = std::min(pts.size, begin + kBlock);
    const std::size_t m = end - begin;
    const simd::PointsSoA block = pts.subrange(begin, end);
    k.plane_offset_f64(block, apex_, axis_, values);
    for (std::size_t i = 0; i < m; ++i) inside[i] = values[i] >= band_.z_min && values[i] <= band_.z_max;
    for (const Plane& s : sides_) {
      k.plane_offset_f64(block, apex_, s.normal, values);
      for (std::size_t i = 0; i < m; ++i) inside[i] = inside[i] && values[i] >= 0.0;
    }
    for (std::size_t i = 0; i < m; ++i)
      if (inside[i]) kept.push_back(begin + i);
  }
  return kept;
}

WorldRegion WorldRegion::transformed(const RigidPose& t) const {
  WorldRegion r;
  r.pixels_ = pixels_;
  r.pose_ = t * pose_;
  r.band_ = band_;
  r.build(k_);
  return r;
}

WorldRegion project_polygon_region(std::span<const Vec2> pixel_polygon, const CameraIntrinsics& k,
                                   const RigidPose& pose, ZBand band) {
  return WorldRegion(pixel_polygon, k, pose, band);
}

WorldRegion project_polygon_region(const GraspRect8& rect, const CameraIntrinsics& k, const RigidPose& pose,
                                   ZBand band) {
  return WorldRegion(rect.corners, k, pose, band);
}

}  // namespace graspkit
