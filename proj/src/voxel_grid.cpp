#include "graspkit/voxel_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <unordered_set>

#include "graspkit/errors.hpp"

namespace graspkit {
namespace {

constexpr double kTargetOccupancy = 12.0;

struct Candidate {
  double d2;
  std::size_t index;
  bool operator<(const Candidate& o) const { return d2 < o.d2 || (d2 == o.d2 && index < o.index); }
};

}  // namespace

VoxelGrid::VoxelGrid(const PointCloud& cloud, double cell_size) {
  const std::size_t n = cloud.size();
  if (n > std::numeric_limits<std::uint32_t>::max()) throw Error(ErrorCode::kInvalidArgument, "cloud too large");
  if (n == 0) {
    cell_start_.assign(2, 0);
    return;
  }
  Vec3 lo = cloud.point(0), hi = cloud.point(0);
  for (const Vec3& p : cloud.points()) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }
  const Vec3 ext = hi - lo;
  const double longest = std::max({ext.x, ext.y, ext.z});
  origin_ = lo;

  const auto cell_count = [&](double h) {
    double total = 1.0;
    for (int a = 0; a < 3; ++a) total *= std::floor(ext[a] / h) + 1.0;
    return total;
  };
  const double max_cells = 4.0 * static_cast<double>(n) + 4096.0;

  double h = cell_size;
  if (!(h > 0.0)) {
    h = longest > 0.0 ? longest / std::max(1.0, std::cbrt(static_cast<double>(n) / kTargetOccupancy)) : 1.0;
    // Surface-like clouds fill few cells; shrink until occupied cells hold
    // about the target count.
    for (int iter = 0; iter < 4 && longest > 0.0; ++iter) {
      std::unordered_set<std::uint64_t> occupied;
      for (const Vec3& p : cloud.points()) {
        const auto i = static_cast<std::uint64_t>((p.x - lo.x) / h);
        const auto j = static_cast<std::uint64_t>((p.y - lo.y) / h);
        const auto k = static_cast<std::uint64_t>((p.z - lo.z) / h);
        occupied.insert((i * 0x9E3779B1ULL) ^ (j * 0x85EBCA77ULL) ^ (k * 0xC2B2AE3DULL) ^ (i << 42) ^ (j << 21));
      }
      const double occupancy = static_cast<double>(n) / static_cast<double>(occupied.size());
      if (occupancy <= 2.0 * kTargetOccupancy) break;
      const double next = h * std::sqrt(kTargetOccupancy / occupancy);
      if (cell_count(next) > max_cells) break;
      h = next;
    }
  }
  while (cell_count(h) > max_cells) h *= 1.5;
  h_ = h;
  for (int a = 0; a < 3; ++a) dims_[a] = static_cast<std::int64_t>(std::floor(ext[a] / h)) + 1;

  const std::size_t ncells = static_cast<std::size_t>(dims_[0] * dims_[1] * dims_[2]);
  std::vector<std::size_t> cell_of_point(n);
  cell_start_.assign(ncells + 1, 0);
  for (std::size_t p = 0; p < n; ++p) {
    const CellCoord c = cell_of(cloud.point(p));
    cell_of_point[p] = key(std::clamp<std::int64_t>(c.i, 0, dims_[0] - 1), std::clamp<std::int64_t>(c.j, 0, dims_[1] - 1),
                           std::clamp<std::int64_t>(c.k, 0, dims_[2] - 1));
    ++cell_start_[cell_of_point[p] + 1];
  }
  for (std::size_t c = 0; c < ncells; ++c) cell_start_[c + 1] += cell_start_[c];
  std::vector<std::size_t> fill(cell_start_.begin(), cell_start_.end() - 1);
  xs_.resize(n);
  ys_.resize(n);
  zs_.resize(n);
  original_.resize(n);
  for (std::size_t p = 0; p < n; ++p) {
    const std::size_t slot = fill[cell_of_point[p]]++;
    const Vec3 q = cloud.point(p);
    xs_[slot] = q.x;
    ys_[slot] = q.y;
    zs_[slot] = q.z;
    original_[slot] = static_cast<std::uint32_t>(p);
  }
}

VoxelGrid::CellCoord VoxelGrid::cell_of(Vec3 p) const {
  return {static_cast<std::int64_t>(std::floor((p.x - origin_.x) / h_)),
          static_cast<std::int64_t>(std::floor((p.y - origin_.y) / h_)),
          static_cast<std::int64_t>(std::floor((p.z - origin_.z) / h_))};
}

std::vector<std::size_t> VoxelGrid::knn(Vec3 query, std::size_t k) const {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  if (k > size()) throw Error(ErrorCode::kKTooLarge, "k exceeds the number of points");

  const simd::Kernels& kern = simd::active();
  std::priority_queue<Candidate> heap;  // max-heap on (d2, index)
  std::vector<double> d2;
  const auto visit = [&](std::size_t cell) {
    const simd::PointsSoA block = cell_block(cell);
    if (block.size == 0) return;
    d2.resize(block.size);
    kern.squared_distance_f64(block, query, d2.data());
    const std::uint32_t* ids = original_.data() + cell_start_[cell];
    for (std::size_t i = 0; i < block.size; ++i) {
      const Candidate c{d2[i], ids[i]};
      if (heap.size() < k) heap.push(c);
      else if (c < heap.top()) {
        heap.pop();
        heap.push(c);
      }
    }
  };

  const CellCoord c = cell_of(query);
  for (std::int64_t r = 0;; ++r) {
    const std::int64_t i0 = c.i - r, i1 = c.i + r;
    const std::int64_t j0 = c.j - r, j1 = c.j + r;
    const std::int64_t k0 = c.k - r, k1 = c.k + r;
    for (std::int64_t i = std::max<std::int64_t>(i0, 0); i <= std::min(i1, dims_[0] - 1); ++i) {
      const bool i_edge = (i == i0 || i == i1);
      for (std::int64_t j = std::max<std::int64_t>(j0, 0); j <= std::min(j1, dims_[1] - 1); ++j) {
        const bool edge = i_edge || j == j0 || j == j1;
        if (edge) {
          for (std::int64_t kk = std::max<std::int64_t>(k0, 0); kk <= std::min(k1, dims_[2] - 1); ++kk)
            visit(key(i, j, kk));
        } else {
          if (k0 >= 0 && k0 < dims_[2]) visit(key(i, j, k0));
          if (k1 >= 0 && k1 < dims_[2] && k1 != k0) visit(key(i, j, k1));
        }
      }
    }
    const bool covers_grid = i0 <= 0 && j0 <= 0 && k0 <= 0 && i1 >= dims_[0] - 1 && j1 >= dims_[1] - 1 &&
                             k1 >= dims_[2] - 1;
    if (covers_grid) break;
    if (heap.size() == k) {
      // Any point outside the visited block is at least this far away.
      double bound = std::numeric_limits<double>::infinity();
      const std::int64_t lo_idx[3] = {i0, j0, k0}, hi_idx[3] = {i1 + 1, j1 + 1, k1 + 1};
      for (int a = 0; a < 3; ++a) {
        const double lo = origin_[a] + static_cast<double>(lo_idx[a]) * h_;
        const double hi = origin_[a] + static_cast<double>(hi_idx[a]) * h_;
        bound = std::min({bound, query[a] - lo, hi - query[a]});
      }
      // Slack for rounding in the cell assignment.
      bound = std::max(bound - 1e-7 * h_, 0.0);
      if (heap.top().d2 < bound * bound) break;
    }
  }

  std::vector<std::size_t> out(heap.size());
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = heap.top().index;
    heap.pop();
  }
  return out;
}

std::vector<std::size_t> knn(const PointCloud& cloud, Vec3 query, std::size_t k) {
  if (k > cloud.size()) throw Error(ErrorCode::kKTooLarge, "k exceeds the number of points");
  return VoxelGrid(cloud).knn(query, k);
}

}  // namespace graspkit
