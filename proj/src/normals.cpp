#include "graspkit/normals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "graspkit/errors.hpp"
#include "graspkit/parallel.hpp"

namespace graspkit {

SymmetricEigen3 eigen_symmetric3(const Mat3& a) {
  SymmetricEigen3 out;
  const double p1 = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
  const double q = (a(0, 0) + a(1, 1) + a(2, 2)) / 3.0;
  const double d0 = a(0, 0) - q, d1 = a(1, 1) - q, d2 = a(2, 2) - q;
  const double p2 = d0 * d0 + d1 * d1 + d2 * d2 + 2.0 * p1;
  if (p2 <= 0.0) {
    out.values = {q, q, q};
    out.smallest_vector = {0, 0, 1};
    return out;
  }
  const double p = std::sqrt(p2 / 6.0);
  Mat3 b = a;
  for (int i = 0; i < 3; ++i) b(i, i) -= q;
  for (double& v : b.m) v /= p;
  const double r = std::clamp(determinant(b) / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double largest = q + 2.0 * p * std::cos(phi);
  const double smallest = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  const double middle = 3.0 * q - largest - smallest;
  out.values = {smallest, std::clamp(middle, smallest, largest), largest};

  Mat3 m = a;
  for (int i = 0; i < 3; ++i) m(i, i) -= smallest;
  const Vec3 r0 = m.row(0), r1 = m.row(1), r2 = m.row(2);
  const Vec3 c01 = cross(r0, r1), c02 = cross(r0, r2), c12 = cross(r1, r2);
  const double n01 = dot(c01, c01), n02 = dot(c02, c02), n12 = dot(c12, c12);
  Vec3 best = c01;
  double best_n = n01;
  if (n02 > best_n) {
    best = c02;
    best_n = n02;
  }
  if (n12 > best_n) {
    best = c12;
    best_n = n12;
  }
  if (best_n > 0.0) {
    const double len = std::sqrt(best_n);
    out.smallest_vector = {best.x / len, best.y / len, best.z / len};
  } else {
    out.smallest_vector = {0, 0, 1};
  }
  return out;
}

PatchStats patch_stats(const PointCloud& cloud, std::span<const std::size_t> indices) {
  if (indices.size() < 3) throw Error(ErrorCode::kPatchTooSmall, "a patch needs at least 3 points");
  PatchStats s;
  s.count = indices.size();
  Vec3 sum{};
  for (std::size_t i : indices) sum = sum + cloud.point(i);
  const double n = static_cast<double>(s.count);
  s.centroid = {sum.x / n, sum.y / n, sum.z / n};
  Mat3 w{};
  for (std::size_t i : indices) {
    const Vec3 d = cloud.point(i) - s.centroid;
    for (int r = 0; r < 3; ++r)
      for (int c = r; c < 3; ++c) w(r, c) += d[r] * d[c];
  }
  w(1, 0) = w(0, 1);
  w(2, 0) = w(0, 2);
  w(2, 1) = w(1, 2);
  s.scatter = w;
  return s;
}

NormalEstimate estimate_normal(const PatchStats& stats, Vec3 viewpoint) {
  const Mat3& w = stats.scatter;
  const double trace = w(0, 0) + w(1, 1) + w(2, 2);
  if (!(trace > 0.0)) throw Error(ErrorCode::kDegeneratePatch, "patch has no spread");
  const SymmetricEigen3 eig = eigen_symmetric3(w);
  if (eig.values[1] - eig.values[0] <= 1e-9 * trace) {
    throw Error(ErrorCode::kDegeneratePatch, "smallest eigenvalue is not separated (collinear or isotropic patch)");
  }
  Vec3 n = eig.smallest_vector;
  if (dot(n, viewpoint - stats.centroid) < 0.0) n = -n;
  // Rayleigh quotient of the returned vector; exact zero on exactly planar input.
  const double lambda_min = std::max(0.0, dot(n, w * n));
  const double planarity = eig.values[1] > 0.0 ? std::clamp(lambda_min / eig.values[1], 0.0, 1.0) : 0.0;
  return {n, planarity};
}

std::vector<std::size_t> patch_indices(const PointCloud& cloud, const VoxelGrid& grid, std::size_t index,
                                       const PatchParams& params) {
  const Vec3 q = cloud.point(index);
  std::vector<std::size_t> idx = grid.knn(q, std::min(params.k, cloud.size()));
  if (params.radius > 0.0) {
    const double r2 = params.radius * params.radius;
    std::erase_if(idx, [&](std::size_t i) {
      const Vec3 d = cloud.point(i) - q;
      return dot(d, d) > r2;
    });
  }
  return idx;
}

std::vector<std::optional<NormalEstimate>> estimate_normals(const PointCloud& cloud, const VoxelGrid& grid,
                                                            const PatchParams& params, Vec3 viewpoint) {
  std::vector<std::optional<NormalEstimate>> out(cloud.size());
  parallel_for(cloud.size(), [&](std::size_t i) {
    const std::vector<std::size_t> idx = patch_indices(cloud, grid, i, params);
    if (idx.size() < 3) return;
    try {
      out[i] = estimate_normal(patch_stats(cloud, idx), viewpoint);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegeneratePatch) throw;
    }
  });
  return out;
}

}  // namespace graspkit
