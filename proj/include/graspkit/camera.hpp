#pragma once

// Pinhole back-projection and the image-polygon crop region.

#include <array>
#include <span>
#include <vector>

#include "graspkit/rect.hpp"
#include "graspkit/simd.hpp"
#include "graspkit/vec.hpp"

namespace graspkit {

struct CameraIntrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;

  /// Throws InvalidArgument unless fx, fy > 0 and all values are finite.
  void validate() const;
};

/// Camera-to-world transform: p_world = rotation * p_camera + translation.
struct RigidPose {
  Mat3 rotation = Mat3::identity();
  Vec3 translation{};

  static RigidPose identity() { return {}; }
  /// Throws InvalidArgument unless rotation is orthonormal with det +1 (1e-9).
  static RigidPose make(const Mat3& rotation, Vec3 translation);
  /// Row-major rotation then translation.
  static RigidPose from_row_major(std::span<const double, 12> values);
  std::array<double, 12> to_row_major() const;

  Vec3 apply(Vec3 p) const { return rotation * p + translation; }
  Vec3 apply_inverse(Vec3 p) const { return rotation.transposed() * (p - translation); }
  RigidPose inverse() const;
  /// (a * b)(p) = a(b(p))
  friend RigidPose operator*(const RigidPose& a, const RigidPose& b);
};

/// Depth interval in the camera frame.
struct ZBand {
  double z_min = 0.0;
  double z_max = 0.0;

  /// Throws InvalidArgument unless 0 < z_min < z_max.
  void validate() const;
};

/// Throws NonPositiveDepth for zc <= 0.
Vec3 backproject_pixel(double u, double v, double zc, const CameraIntrinsics& k);

/// Forward pinhole map; the point must have positive depth.
Vec2 project_point(Vec3 p_camera, const CameraIntrinsics& k);

Vec3 camera_to_world(Vec3 p, const RigidPose& pose);
Vec3 world_to_camera(Vec3 p, const RigidPose& pose);

/// World points whose pixel projection lies inside a convex image polygon and
/// whose camera depth lies in a band: a truncated pyramid with its apex at the
/// camera center. Boundaries are inclusive.
class WorldRegion {
 public:
  /// Half-space form used for membership: for every side plane,
  /// dot(normal, p - apex) >= 0, and dot(axis, p - apex) in [z_min, z_max].
  struct Plane {
    Vec3 normal;
  };

  /// Throws InvalidArgument for a non-convex or degenerate polygon.
  WorldRegion(std::span<const Vec2> pixel_polygon, const CameraIntrinsics& k, const RigidPose& pose, ZBand band);

  bool contains(Vec3 p) const;

  /// Indices of points inside, in order, computed with the active SIMD kernels.
  /// Agrees exactly with contains().
  std::vector<std::size_t> select(simd::PointsSoA pts) const;

  /// The region seen through another rigid transform: T applied to every point.
  WorldRegion transformed(const RigidPose& t) const;

  const std::vector<Vec3>& near_polygon() const { return near_; }
  const std::vector<Vec3>& far_polygon() const { return far_; }
  const std::vector<Vec2>& pixel_polygon() const { return pixels_; }
  Vec3 apex() const { return apex_; }
  /// Camera optical axis in the world frame.
  Vec3 axis() const { return axis_; }
  ZBand band() const { return band_; }
  const RigidPose& camera_pose() const { return pose_; }

 private:
  WorldRegion() = default;
  void build(const CameraIntrinsics& k);

  std::vector<Vec2> pixels_;
  RigidPose pose_;
  ZBand band_;
  Vec3 apex_;
  Vec3 axis_;
  std::vector<Plane> sides_;
  std::vector<Vec3> near_;
  std::vector<Vec3> far_;
  CameraIntrinsics k_;
};

WorldRegion project_polygon_region(std::span<const Vec2> pixel_polygon, const CameraIntrinsics& k,
                                   const RigidPose& pose, ZBand band);
WorldRegion project_polygon_region(const GraspRect8& rect, const CameraIntrinsics& k, const RigidPose& pose,
                                   ZBand band);

}  // namespace graspkit
