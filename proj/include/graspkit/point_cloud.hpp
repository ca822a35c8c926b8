#pragma once

#include <span>
#include <vector>

#include "graspkit/camera.hpp"
#include "graspkit/simd.hpp"
#include "graspkit/vec.hpp"

namespace graspkit {

/// Immutable set of 3-D points with optional unit normals. A structure-of-
/// arrays copy is kept alongside for the SIMD kernels.
class PointCloud {
 public:
  PointCloud() = default;
  /// Throws InvalidArgument for non-finite coordinates, or normals that are
  /// not parallel to points or not unit length within 1e-6.
  explicit PointCloud(std::vector<Vec3> points, std::vector<Vec3> normals = {});

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  bool has_normals() const { return !normals_.empty(); }
  const std::vector<Vec3>& points() const { return points_; }
  const std::vector<Vec3>& normals() const { return normals_; }
  Vec3 point(std::size_t i) const { return points_[i]; }
  simd::PointsSoA soa() const { return {xs_.data(), ys_.data(), zs_.data(), points_.size()}; }

  /// Points (and normals) at the given indices, in the given order.
  PointCloud subset(std::span<const std::size_t> indices) const;
  PointCloud with_normals(std::vector<Vec3> normals) const;
  /// Every point (and normal) mapped through a rigid transform.
  PointCloud transformed(const RigidPose& t) const;

 private:
  std::vector<Vec3> points_;
  std::vector<Vec3> normals_;
  std::vector<double> xs_, ys_, zs_;
};

/// Points inside the region, original order preserved.
PointCloud crop(const PointCloud& cloud, const WorldRegion& region);

/// Centroid of the points, accumulated in index order.
Vec3 centroid(const PointCloud& cloud);

}  // namespace graspkit
