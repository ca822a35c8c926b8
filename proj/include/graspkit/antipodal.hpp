#pragma once

// Antipodal grasp search on a cropped cloud.
//
// Gripper frame: the x-axis is the closing axis (pointing from the left
// finger into the object), the fingers hang along -y from the palm, and z
// completes a right-handed frame. The frame origin sits on the left contact,
// which is the sampled seed point.
//
//   y ^      palm  (fd/2 + pc, fd/2 + pc + ft]
//     |   |==================|
//     |   | |              | |  shanks (fd/2, fd/2 + pc]
//     |   |#|   object     |#|  pads    [-fd/2, fd/2]
//     +----------------------------> x
//       x_L ^ seed      x_R
//
// fd = finger_depth, pc = palm_clearance, ft = finger_thickness. The pad
// column is |y| <= fd/2, |z| <= fd/2.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "graspkit/camera.hpp"
#include "graspkit/errors.hpp"
#include "graspkit/normals.hpp"
#include "graspkit/point_cloud.hpp"
#include "graspkit/voxel_grid.hpp"

namespace graspkit {

struct GripperModel {
  double max_opening = 0.08;
  double finger_thickness = 0.003;
  double finger_depth = 0.03;
  double palm_clearance = 0.02;
  /// Minimum mean |cos| between contact normals and the closing axis.
  double mu_cos = 0.9;

  void validate() const;
};

/// Gap added to the measured contact span when setting the opening.
inline constexpr double kOpeningClearance = 0.002;

struct SamplerConfig {
  std::size_t n_seeds = 64;
  std::size_t n_orientations = 8;
  std::uint64_t rng_seed = 0;
  PatchParams patch;

  void validate() const;
};

enum class RejectReason { kPenetration, kNoContact, kNotAntipodal };
std::string_view to_string(RejectReason r);

struct GraspCandidate {
  RigidPose pose;  ///< gripper frame in the world; origin at the seed point
  std::size_t seed_index = 0;
  std::size_t orientation_index = 0;
  double cost = 0.0;  ///< 1 - antipodal score; lower is better
  double opening = 0.0;
  std::vector<std::size_t> left_contacts;
  std::vector<std::size_t> right_contacts;
};

struct ScoredGrasp {
  double cost = 0.0;
  double opening = 0.0;
  std::vector<std::size_t> left_contacts;   ///< contacts inside the friction cone (|n.x| >= mu_cos)
  std::vector<std::size_t> right_contacts;
};

using ScoreOutcome = std::variant<ScoredGrasp, RejectReason>;

struct RejectionHistogram {
  std::size_t penetration = 0;
  std::size_t no_contact = 0;
  std::size_t not_antipodal = 0;
  std::size_t degenerate_seeds = 0;  ///< seed slots that exhausted their retry budget
};

class NoValidGraspError : public Error {
 public:
  explicit NoValidGraspError(const RejectionHistogram& h);
  const RejectionHistogram& histogram() const noexcept { return histogram_; }

 private:
  RejectionHistogram histogram_;
};

/// Search state over one cloud: spatial index plus per-point normals.
/// Normals given with the cloud are used as-is; otherwise they are estimated
/// from kNN patches and oriented away from the cloud centroid.
class GraspWorkspace {
 public:
  GraspWorkspace(PointCloud cloud, const PatchParams& patch);

  const PointCloud& cloud() const { return cloud_; }
  const VoxelGrid& grid() const { return grid_; }
  const std::optional<Vec3>& normal(std::size_t i) const { return normals_[i]; }
  Vec3 object_centroid() const { return centroid_; }

 private:
  PointCloud cloud_;
  VoxelGrid grid_;
  std::vector<std::optional<Vec3>> normals_;
  Vec3 centroid_;
};

struct SeedDraw {
  std::size_t index = 0;
  Vec3 normal;
};

/// Draws the seed for slot `slot`: a uniform point index from a counter-based
/// stream keyed by rng_seed. Points without a usable normal are redrawn, up
/// to 10 attempts per slot; returns nothing when all fail. Throws EmptyCloud.
std::optional<SeedDraw> sample_seed(const GraspWorkspace& ws, std::uint64_t rng_seed, std::size_t slot);

/// Raw draw (no normal check): attempt `attempt` of slot `slot`.
std::size_t seed_index_draw(std::uint64_t rng_seed, std::size_t slot, std::size_t attempt, std::size_t cloud_size);

/// n_orientations gripper poses at the seed with x = -normal. The y-axis of
/// orientation 0 is `up` projected perpendicular to x (world x, then world y,
/// when that is degenerate); orientation j is rotated by 2*pi*j/n about x.
std::vector<RigidPose> candidate_poses(Vec3 seed_point, Vec3 normal, std::size_t n_orientations,
                                       Vec3 up = {0, 0, 1});

/// Scores one gripper pose; see the frame diagram above.
ScoreOutcome score_candidate(const GraspWorkspace& ws, const RigidPose& pose, const GripperModel& g);

/// Evaluates n_seeds x n_orientations candidates and returns the lowest cost,
/// ties broken by (seed index, orientation index). Deterministic and
/// independent of thread count. Throws NoValidGraspError.
GraspCandidate search_grasps(const GraspWorkspace& ws, const SamplerConfig& cfg, const GripperModel& g,
                             Vec3 up = {0, 0, 1});

/// Crops the cloud to the region, then searches with the camera's viewing
/// direction reversed as the approach reference. Throws EmptyCloud when the
/// crop is empty and NoValidGraspError when nothing passes.
GraspCandidate best_grasp(const PointCloud& cloud, const WorldRegion& region, const SamplerConfig& cfg,
                          const GripperModel& g);

}  // namespace graspkit
