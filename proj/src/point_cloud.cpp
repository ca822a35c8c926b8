#include "graspkit/point_cloud.hpp"

#include <cmath>

#include "graspkit/errors.hpp"

namespace graspkit {

PointCloud::PointCloud(std::vector<Vec3> points, std::vector<Vec3> normals)
    : points_(std::move(points)), normals_(std::move(normals)) {
  if (!normals_.empty() && normals_.size() != points_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "normals must be parallel to points");
  }
  xs_.reserve(points_.size());
  ys_.reserve(points_.size());
  zs_.reserve(points_.size());
  for (const Vec3& p : points_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
      throw Error(ErrorCode::kInvalidArgument, "point coordinates must be finite");
    }
    xs_.push_back(p.x);
    ys_.push_back(p.y);
    zs_.push_back(p.z);
  }
  for (const Vec3& n : normals_) {
    if (!(std::abs(norm(n) - 1.0) <= 1e-6)) throw Error(ErrorCode::kInvalidArgument, "normals must be unit length");
  }
}

PointCloud PointCloud::subset(std::span<const std::size_t> indices) const {
  std::vector<Vec3> pts, nrm;
  pts.reserve(indices.size());
  for (std::size_t i : indices) pts.push_back(points_.at(i));
  if (has_normals()) {
    nrm.reserve(indices.size());
    for (std::size_t i : indices) nrm.push_back(normals_[i]);
  }
  return PointCloud(std::move(pts), std::move(nrm));
}

PointCloud PointCloud::with_normals(std::vector<Vec3> normals) const { return PointCloud(points_, std::move(normals)); }

PointCloud PointCloud::transformed(const RigidPose& t) const {
  std::vector<Vec3> pts, nrm;
  pts.reserve(size());
  for (const Vec3& p : points_) pts.push_back(t.apply(p));
  for (const Vec3& n : normals_) nrm.push_back(normalized(t.rotation * n));
  return PointCloud(std::move(pts), std::move(nrm));
}

PointCloud crop(const PointCloud& cloud, const WorldRegion& region) {
  const std::vector<std::size_t> kept = region.select(cloud.soa());
  if (kept.size() == cloud.size()) return cloud;
  return cloud.subset(kept);
}

Vec3 centroid(const PointCloud& cloud) {
  Vec3 sum{};
  for (const Vec3& p : cloud.points()) sum = sum + p;
  return cloud.empty() ? sum : (1.0 / static_cast<double>(cloud.size())) * sum;
}

}  // namespace graspkit
