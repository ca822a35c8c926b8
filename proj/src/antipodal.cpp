#include "graspkit/antipodal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "graspkit/parallel.hpp"
#include "graspkit/rng.hpp"

namespace graspkit {
namespace {

constexpr std::size_t kSeedAttempts = 10;

struct LocalPoints {
  std::vector<double> x, y, z;
  std::vector<std::size_t> index;
};

// Points of the workspace inside the gripper's local bounding box, in gripper
// coordinates.
LocalPoints gather_local(const GraspWorkspace& ws, const RigidPose& pose, Vec3 local_lo, Vec3 local_hi) {
  Vec3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity()};
  Vec3 hi = -lo;
  for (int c = 0; c < 8; ++c) {
    const Vec3 corner{(c & 1) ? local_hi.x : local_lo.x, (c & 2) ? local_hi.y : local_lo.y,
                      (c & 4) ? local_hi.z : local_lo.z};
    const Vec3 w = pose.apply(corner);
    lo = {std::min(lo.x, w.x), std::min(lo.y, w.y), std::min(lo.z, w.z)};
    hi = {std::max(hi.x, w.x), std::max(hi.y, w.y), std::max(hi.z, w.z)};
  }
  const simd::Kernels& k = simd::active();
  const Vec3 ax = pose.rotation.column(0), ay = pose.rotation.column(1), az = pose.rotation.column(2);
  LocalPoints out;
  std::vector<double> bx, by, bz;
  ws.grid().for_each_cell_in_box(lo, hi, [&](simd::PointsSoA block, const std::uint32_t* ids) {
    bx.resize(block.size);
    by.resize(block.size);
    bz.resize(block.size);
    k.to_frame_f64(block, pose.translation, ax, ay, az, bx.data(), by.data(), bz.data());
    for (std::size_t i = 0; i < block.size; ++i) {
      if (bx[i] < local_lo.x || bx[i] > local_hi.x || by[i] < local_lo.y || by[i] > local_hi.y ||
          bz[i] < local_lo.z || bz[i] > local_hi.z) {
        continue;
      }
      out.x.push_back(bx[i]);
      out.y.push_back(by[i]);
      out.z.push_back(bz[i]);
      out.index.push_back(ids[i]);
    }
  });
  return out;
}

// Mean |n . axis| over contacts with a normal, plus the in-cone subset.
struct Alignment {
  double mean = 0.0;
  std::size_t counted = 0;
  std::vector<std::size_t> in_cone;
};

Alignment alignment(const GraspWorkspace& ws, std::vector<std::size_t>& contacts, Vec3 axis, double mu_cos) {
  std::sort(contacts.begin(), contacts.end());
  Alignment a;
  double sum = 0.0;
  for (std::size_t i : contacts) {
    const auto& n = ws.normal(i);
    if (!n) continue;
    const double c = std::abs(dot(*n, axis));
    sum += c;
    ++a.counted;
    if (c >= mu_cos) a.in_cone.push_back(i);
  }
  if (a.counted > 0) a.mean = sum / static_cast<double>(a.counted);
  return a;
}

bool better(const GraspCandidate& a, const GraspCandidate& b) {
  if (a.cost != b.cost) return a.cost < b.cost;
  if (a.seed_index != b.seed_index) return a.seed_index < b.seed_index;
  return a.orientation_index < b.orientation_index;
}

}  // namespace

void GripperModel::validate() const {
  if (!(max_opening > 0.0 && finger_thickness > 0.0 && finger_depth > 0.0 && palm_clearance > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "gripper lengths must be positive");
  }
  if (!(mu_cos > 0.0 && mu_cos <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "mu_cos must lie in (0, 1]");
}

void SamplerConfig::validate() const {
  if (n_seeds < 1 || n_orientations < 1) {
    throw Error(ErrorCode::kInvalidArgument, "n_seeds and n_orientations must be at least 1");
  }
  if (patch.k < 3) throw Error(ErrorCode::kInvalidArgument, "patch k must be at least 3");
}

std::string_view to_string(RejectReason r) {
  switch (r) {
    case RejectReason::kPenetration: return "penetration";
    case RejectReason::kNoContact: return "no-contact";
    case RejectReason::kNotAntipodal: return "not-antipodal";
  }
  return "unknown";
}

NoValidGraspError::NoValidGraspError(const RejectionHistogram& h)
    : Error(ErrorCode::kNoValidGrasp, "penetration=" + std::to_string(h.penetration) +
                                          " no_contact=" + std::to_string(h.no_contact) +
                                          " not_antipodal=" + std::to_string(h.not_antipodal) +
                                          " degenerate_seeds=" + std::to_string(h.degenerate_seeds)),
      histogram_(h) {}

GraspWorkspace::GraspWorkspace(PointCloud cloud, const PatchParams& patch)
    : cloud_(std::move(cloud)), grid_(cloud_), centroid_(centroid(cloud_)) {
  normals_.resize(cloud_.size());
  if (cloud_.has_normals()) {
    for (std::size_t i = 0; i < cloud_.size(); ++i) normals_[i] = cloud_.normals()[i];
    return;
  }
  const auto estimates = estimate_normals(cloud_, grid_, patch);
  for (std::size_t i = 0; i < cloud_.size(); ++i) {
    if (!estimates[i]) continue;
    Vec3 n = estimates[i]->normal;
    if (dot(n, cloud_.point(i) - centroid_) < 0.0) n = -n;
    normals_[i] = n;
  }
}

std::size_t seed_index_draw(std::uint64_t rng_seed, std::size_t slot, std::size_t attempt, std::size_t cloud_size) {
  return static_cast<std::size_t>(counter_uniform_index(rng_seed, slot, attempt, cloud_size));
}

std::optional<SeedDraw> sample_seed(const GraspWorkspace& ws, std::uint64_t rng_seed, std::size_t slot) {
  if (ws.cloud().empty()) throw Error(ErrorCode::kEmptyCloud, "cannot sample from an empty cloud");
  for (std::size_t attempt = 0; attempt < kSeedAttempts; ++attempt) {
    const std::size_t idx = seed_index_draw(rng_seed, slot, attempt, ws.cloud().size());
    if (const auto& n = ws.normal(idx)) return SeedDraw{idx, *n};
  }
  return std::nullopt;
}

std::vector<RigidPose> candidate_poses(Vec3 seed_point, Vec3 normal, std::size_t n_orientations, Vec3 up) {
  const Vec3 x = -normalized(normal);
  const auto perpendicular = [&](Vec3 ref) { return ref - dot(ref, x) * x; };
  Vec3 y0 = perpendicular(up);
  if (norm(y0) < 1e-6) y0 = perpendicular({1, 0, 0});
  if (norm(y0) < 1e-6) y0 = perpendicular({0, 1, 0});
  y0 = normalized(y0);
  const Vec3 z0 = cross(x, y0);
  std::vector<RigidPose> poses;
  poses.reserve(n_orientations);
  for (std::size_t j = 0; j < n_orientations; ++j) {
    const double phi = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n_orientations);
    const Vec3 y = std::cos(phi) * y0 + std::sin(phi) * z0;
    const Vec3 z = cross(x, y);
    poses.push_back({Mat3::from_columns(x, y, z), seed_point});
  }
  return poses;
}

ScoreOutcome score_candidate(const GraspWorkspace& ws, const RigidPose& pose, const GripperModel& g) {
  const double ft = g.finger_thickness;
  const double half_depth = g.finger_depth / 2;
  const double shank_top = half_depth + g.palm_clearance;
  const double palm_top = shank_top + ft;
  const double reach = g.max_opening + 2 * ft;
  const LocalPoints pts = gather_local(ws, pose, {-reach, -half_depth, -half_depth}, {reach, palm_top, half_depth});
  const std::size_t n = pts.index.size();

  const auto in_column = [&](std::size_t i) { return pts.y[i] <= half_depth; };

  std::vector<std::size_t> left, right;
  double x_near = std::numeric_limits<double>::infinity();
  double x_far = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (!in_column(i)) continue;
    if (std::abs(pts.x[i]) <= ft) {
      left.push_back(i);
      x_near = std::min(x_near, pts.x[i]);
    } else if (pts.x[i] > ft) {
      x_far = std::max(x_far, pts.x[i]);
    }
  }
  if (left.empty() || !std::isfinite(x_far)) return RejectReason::kNoContact;
  const double opening = x_far - x_near + kOpeningClearance;
  if (opening > g.max_opening) return RejectReason::kNoContact;

  const double x_left = x_near - kOpeningClearance / 2;
  const double x_right = x_far + kOpeningClearance / 2;
  const double mid = (x_left + x_right) / 2;
  const double sweep_lo = mid - g.max_opening / 2 - ft;
  const double sweep_hi = mid + g.max_opening / 2 + ft;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = pts.x[i], y = pts.y[i];
    if (y <= shank_top) {
      // Fingers sweep from the fully open pose to their contact planes.
      if ((x >= sweep_lo && x < x_left) || (x > x_right && x <= sweep_hi)) return RejectReason::kPenetration;
    } else if (x >= sweep_lo && x <= sweep_hi) {
      return RejectReason::kPenetration;  // palm
    }
    if (in_column(i) && x >= x_far - ft) right.push_back(i);
  }

  std::vector<std::size_t> left_ids, right_ids;
  for (std::size_t i : left) left_ids.push_back(pts.index[i]);
  for (std::size_t i : right) right_ids.push_back(pts.index[i]);
  const Vec3 axis = pose.rotation.column(0);
  const Alignment la = alignment(ws, left_ids, axis, g.mu_cos);
  const Alignment ra = alignment(ws, right_ids, axis, g.mu_cos);
  if (la.counted == 0 || ra.counted == 0) return RejectReason::kNoContact;
  const double score = std::min(la.mean, ra.mean);
  if (score < g.mu_cos) return RejectReason::kNotAntipodal;
  return ScoredGrasp{std::max(0.0, 1.0 - score), opening, la.in_cone, ra.in_cone};
}

GraspCandidate search_grasps(const GraspWorkspace& ws, const SamplerConfig& cfg, const GripperModel& g, Vec3 up) {
  cfg.validate();
  g.validate();
  if (ws.cloud().empty()) throw Error(ErrorCode::kEmptyCloud, "cannot search an empty cloud");

  struct SlotResult {
    std::optional<GraspCandidate> best;
    RejectionHistogram rejections;
  };
  std::vector<SlotResult> slots(cfg.n_seeds);
  parallel_for(cfg.n_seeds, [&](std::size_t s) {
    SlotResult& out = slots[s];
    const std::optional<SeedDraw> seed = sample_seed(ws, cfg.rng_seed, s);
    if (!seed) {
      ++out.rejections.degenerate_seeds;
      return;
    }
    const auto poses = candidate_poses(ws.cloud().point(seed->index), seed->normal, cfg.n_orientations, up);
    for (std::size_t o = 0; o < poses.size(); ++o) {
      const ScoreOutcome r = score_candidate(ws, poses[o], g);
      if (const auto* reason = std::get_if<RejectReason>(&r)) {
        switch (*reason) {
          case RejectReason::kPenetration: ++out.rejections.penetration; break;
          case RejectReason::kNoContact: ++out.rejections.no_contact; break;
          case RejectReason::kNotAntipodal: ++out.rejections.not_antipodal; break;
        }
        continue;
      }
      const auto& scored = std::get<ScoredGrasp>(r);
      GraspCandidate c{poses[o], seed->index, o, scored.cost, scored.opening, scored.left_contacts,
                       scored.right_contacts};
      if (!out.best || better(c, *out.best)) out.best = std::move(c);
    }
  });

  std::optional<GraspCandidate> best;
  RejectionHistogram total;
  for (auto& s : slots) {
    total.penetration += s.rejections.penetration;
    total.no_contact += s.rejections.no_contact;
    total.not_antipodal += s.rejections.not_antipodal;
    total.degenerate_seeds += s.rejections.degenerate_seeds;
    if (s.best && (!best || better(*s.best, *best))) best = std::move(s.best);
  }
  if (!best) throw NoValidGraspError(total);
  return *best;
}

GraspCandidate best_grasp(const PointCloud& cloud, const WorldRegion& region, const SamplerConfig& cfg,
                          const GripperModel& g) {
  const std::vector<std::size_t> kept = region.select(cloud.soa());
  if (kept.empty()) throw Error(ErrorCode::kEmptyCloud, "no points inside the crop region");
  const GraspWorkspace ws(cloud.subset(kept), cfg.patch);
  GraspCandidate c = search_grasps(ws, cfg, g, -region.axis());
  c.seed_index = kept[c.seed_index];
  for (auto& i : c.left_contacts) i = kept[i];
  for (auto& i : c.right_contacts) i = kept[i];
  return c;
}

}  // namespace graspkit
