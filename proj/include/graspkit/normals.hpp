#pragma once

// Local surface normals from neighborhood covariance: the normal of a patch
// is the unit vector minimizing n^T W n, i.e. the eigenvector of the scatter
// matrix W for its smallest eigenvalue.

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "graspkit/point_cloud.hpp"
#include "graspkit/voxel_grid.hpp"

namespace graspkit {

struct PatchStats {
  Vec3 centroid;
  Mat3 scatter;  ///< sum of centered outer products (not divided by N)
  std::size_t count = 0;
};

struct NormalEstimate {
  Vec3 normal;
  double planarity = 0.0;  ///< lambda_min / lambda_mid, in [0, 1]
};

/// Eigen-decomposition of a symmetric 3x3 matrix; values ascending.
struct SymmetricEigen3 {
  std::array<double, 3> values{};
  Vec3 smallest_vector;
};

/// Closed-form (trigonometric) eigenvalues; the smallest eigenvector from the
/// best-conditioned cross product of rows of (A - lambda_min I).
SymmetricEigen3 eigen_symmetric3(const Mat3& a);

/// Throws PatchTooSmall for fewer than 3 indices.
PatchStats patch_stats(const PointCloud& cloud, std::span<const std::size_t> indices);

/// Normal of the patch, flipped so that dot(normal, viewpoint - centroid) >= 0.
/// Throws DegeneratePatch when lambda_mid - lambda_min <= 1e-9 * trace
/// (collinear, isotropic or single-point patches).
NormalEstimate estimate_normal(const PatchStats& stats, Vec3 viewpoint = {});

/// Neighborhood used for a point's patch.
struct PatchParams {
  std::size_t k = 30;
  double radius = 0.0;  ///< drop neighbors beyond this distance; 0 disables
};

/// kNN patch of point `index`, capped by the radius. k is clamped to the cloud size.
std::vector<std::size_t> patch_indices(const PointCloud& cloud, const VoxelGrid& grid, std::size_t index,
                                       const PatchParams& params);

/// Normal for every point (empty where the patch is too small or degenerate).
/// Runs in parallel; results do not depend on the thread count.
std::vector<std::optional<NormalEstimate>> estimate_normals(const PointCloud& cloud, const VoxelGrid& grid,
                                                            const PatchParams& params, Vec3 viewpoint = {});

}  // namespace graspkit
