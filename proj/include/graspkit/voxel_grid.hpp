#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "graspkit/point_cloud.hpp"
#include "graspkit/simd.hpp"

namespace graspkit {

/// Uniform voxel grid over a cloud's bounding box. Points are stored sorted by
/// cell so that each cell is a contiguous SoA range.
class VoxelGrid {
 public:
  /// cell_size <= 0 picks one from the point density.
  explicit VoxelGrid(const PointCloud& cloud, double cell_size = 0.0);

  /// Indices of the k nearest points, ascending by (squared distance, index).
  /// Identical to an exhaustive scan. Throws KTooLarge for k > size and
  /// InvalidArgument for k == 0.
  std::vector<std::size_t> knn(Vec3 query, std::size_t k) const;

  /// Calls fn(block, original_indices) for every non-empty cell overlapping
  /// the axis-aligned box [lo, hi]. Cells are visited in key order.
  template <class Fn>
  void for_each_cell_in_box(Vec3 lo, Vec3 hi, Fn&& fn) const;

  double cell_size() const { return h_; }
  std::size_t size() const { return xs_.size(); }

 private:
  struct CellCoord {
    std::int64_t i, j, k;
  };
  CellCoord cell_of(Vec3 p) const;
  std::size_t key(std::int64_t i, std::int64_t j, std::int64_t k) const {
    return (static_cast<std::size_t>(i) * static_cast<std::size_t>(dims_[1]) + static_cast<std::size_t>(j)) *
               static_cast<std::size_t>(dims_[2]) +
           static_cast<std::size_t>(k);
  }
  simd::PointsSoA cell_block(std::size_t cell) const {
    const std::size_t b = cell_start_[cell], e = cell_start_[cell + 1];
    return {xs_.data() + b, ys_.data() + b, zs_.data() + b, e - b};
  }

  double h_ = 1.0;
  Vec3 origin_{};
  std::int64_t dims_[3] = {1, 1, 1};
  std::vector<std::size_t> cell_start_;
  std::vector<double> xs_, ys_, zs_;
  std::vector<std::uint32_t> original_;
};

/// One-shot kNN; builds a grid per call.
std::vector<std::size_t> knn(const PointCloud& cloud, Vec3 query, std::size_t k);

template <class Fn>
void VoxelGrid::for_each_cell_in_box(Vec3 lo, Vec3 hi, Fn&& fn) const {
  if (xs_.empty()) return;
  const CellCoord a = cell_of(lo), b = cell_of(hi);
  const std::int64_t i0 = std::max<std::int64_t>(a.i, 0), i1 = std::min<std::int64_t>(b.i, dims_[0] - 1);
  const std::int64_t j0 = std::max<std::int64_t>(a.j, 0), j1 = std::min<std::int64_t>(b.j, dims_[1] - 1);
  const std::int64_t k0 = std::max<std::int64_t>(a.k, 0), k1 = std::min<std::int64_t>(b.k, dims_[2] - 1);
  for (std::int64_t i = i0; i <= i1; ++i)
    for (std::int64_t j = j0; j <= j1; ++j)
      for (std::int64_t k = k0; k <= k1; ++k) {
        const std::size_t c = key(i, j, k);
        if (cell_start_[c + 1] == cell_start_[c]) continue;
        fn(cell_block(c), original_.data() + cell_start_[c]);
      }
}

}  // namespace graspkit
