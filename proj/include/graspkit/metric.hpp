#pragma once

// Rectangle metric: a predicted grasp is correct when it overlaps some
// ground-truth positive with Jaccard index at or above a threshold and, when
// enabled, its orientation is within an angular tolerance of that truth.

#include <cstddef>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graspkit/rect.hpp"

namespace graspkit {

struct EvalConfig {
  double jaccard_threshold = 0.25;
  double angle_threshold = std::numbers::pi / 6;  ///< radians
  bool angle_check_enabled = true;

  /// Throws InvalidArgument outside jaccard in (0,1], angle in (0, pi/2].
  void validate() const;
};

/// A rectangle in corner form together with its grasp angle. Annotations are
/// hand-drawn quads that are only approximately rectangular, so evaluation
/// works on the polygon directly instead of forcing a 5-D fit.
struct GraspRegion {
  GraspRect8 polygon;
  double theta = 0.0;

  static GraspRegion from_rect5(const GraspRect5& r);
  /// Winding is made CCW; theta is taken from the first edge.
  static GraspRegion from_corners(const GraspRect8& c);
};

/// |U n V| / |U u V|. Throws DegeneratePolygon for zero-area input.
double jaccard(const GraspRect8& u, const GraspRect8& v);

struct GraspMatch {
  bool correct = false;
  double best_iou = 0.0;
  /// Index of the best truth (see is_correct_grasp); empty when nothing overlaps.
  std::optional<std::size_t> best_index;
};

/// Picks the truth with the highest IoU among those passing the angle gate
/// (all truths when the gate is off or none pass); ties go to the lower
/// index. Throws EmptyTruthSet when `truths` is empty.
GraspMatch is_correct_grasp(const GraspRegion& pred, std::span<const GraspRegion> truths, const EvalConfig& cfg);
GraspMatch is_correct_grasp(const GraspRect5& pred, std::span<const GraspRect5> truths, const EvalConfig& cfg);

struct ImageResult {
  std::string image_id;
  GraspRect8 predicted;
  std::optional<GraspRect8> best_truth;
  double best_iou = 0.0;
  bool matched = false;
};

struct EvalReport {
  std::size_t n_images = 0;
  std::size_t n_correct = 0;
  double accuracy = 0.0;
  std::vector<ImageResult> per_image;  ///< sorted by image id
};

/// Scores every predicted image. Throws MissingAnnotation naming the first
/// prediction without an annotation entry; images with no positives throw
/// EmptyTruthSet.
EvalReport evaluate_dataset(const std::map<std::string, GraspRegion>& preds,
                            const std::map<std::string, std::vector<GraspRegion>>& annotations,
                            const EvalConfig& cfg);
EvalReport evaluate_dataset(const std::map<std::string, GraspRect5>& preds,
                            const std::map<std::string, std::vector<GraspRect5>>& annotations,
                            const EvalConfig& cfg);

}  // namespace graspkit
