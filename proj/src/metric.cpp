#include "graspkit/metric.hpp"

#include <algorithm>
#include <cmath>

#include "graspkit/errors.hpp"
#include "graspkit/parallel.hpp"
#include "graspkit/polygon.hpp"

namespace graspkit {

void EvalConfig::validate() const {
  if (!(jaccard_threshold > 0.0 && jaccard_threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "jaccard threshold must lie in (0, 1]");
  }
  if (!(angle_threshold > 0.0 && angle_threshold <= std::numbers::pi / 2)) {
    throw Error(ErrorCode::kInvalidArgument, "angle threshold must lie in (0, pi/2]");
  }
}

GraspRegion GraspRegion::from_rect5(const GraspRect5& r) { return {rect5_to_corners(r), r.theta}; }

GraspRegion GraspRegion::from_corners(const GraspRect8& c) {
  const GraspRect8 ccw = to_ccw(c);
  return {ccw, first_edge_angle(ccw)};
}

double jaccard(const GraspRect8& u, const GraspRect8& v) {
  const GraspRect8 a = to_ccw(u), b = to_ccw(v);
  const double inter = polygon_intersection_area(a.corners, b.corners);
  const double area_a = signed_area(std::span<const Vec2>(a.corners));
  const double area_b = signed_area(std::span<const Vec2>(b.corners));
  const double uni = area_a + area_b - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

GraspMatch is_correct_grasp(const GraspRegion& pred, std::span<const GraspRegion> truths, const EvalConfig& cfg) {
  if (truths.empty()) throw Error(ErrorCode::kEmptyTruthSet, "no ground-truth rectangles");
  std::optional<std::size_t> best_gated, best_any;
  double iou_gated = -1.0, iou_any = -1.0;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    const double iou = jaccard(pred.polygon, truths[i].polygon);
    if (iou > iou_any) {
      iou_any = iou;
      best_any = i;
    }
    const bool angle_ok =
        !cfg.angle_check_enabled || grasp_angle_difference(pred.theta, truths[i].theta) <= cfg.angle_threshold;
    if (angle_ok && iou > iou_gated) {
      iou_gated = iou;
      best_gated = i;
    }
  }
  GraspMatch m;
  if (best_gated) {
    m.best_iou = iou_gated;
    m.best_index = best_gated;
    m.correct = iou_gated >= cfg.jaccard_threshold;
  } else {
    m.best_iou = iou_any;
    m.best_index = best_any;
  }
  if (m.best_iou <= 0.0) m.best_index.reset();
  return m;
}

GraspMatch is_correct_grasp(const GraspRect5& pred, std::span<const GraspRect5> truths, const EvalConfig& cfg) {
  std::vector<GraspRegion> regions;
  regions.reserve(truths.size());
  for (const auto& t : truths) regions.push_back(GraspRegion::from_rect5(t));
  return is_correct_grasp(GraspRegion::from_rect5(pred), regions, cfg);
}

EvalReport evaluate_dataset(const std::map<std::string, GraspRegion>& preds,
                            const std::map<std::string, std::vector<GraspRegion>>& annotations,
                            const EvalConfig& cfg) {
  cfg.validate();
  std::vector<const std::pair<const std::string, GraspRegion>*> items;
  std::vector<const std::vector<GraspRegion>*> truth_lists;
  for (const auto& entry : preds) {
    const auto it = annotations.find(entry.first);
    if (it == annotations.end()) {
      throw Error(ErrorCode::kMissingAnnotation, "no annotation for image '" + entry.first + "'");
    }
    items.push_back(&entry);
    truth_lists.push_back(&it->second);
  }

  EvalReport report;
  report.per_image.resize(items.size());
  parallel_for(items.size(), [&](std::size_t i) {
    const auto& [id, pred] = *items[i];
    const auto& truths = *truth_lists[i];
    if (truths.empty()) throw Error(ErrorCode::kEmptyTruthSet, "image '" + id + "' has no positive rectangles");
    const GraspMatch m = is_correct_grasp(pred, truths, cfg);
    ImageResult& r = report.per_image[i];
    r.image_id = id;
    r.predicted = pred.polygon;
    if (m.best_index) r.best_truth = truths[*m.best_index].polygon;
    r.best_iou = m.best_iou;
    r.matched = m.correct;
  });
  report.n_images = items.size();
  for (const auto& r : report.per_image) report.n_correct += r.matched ? 1 : 0;
  report.accuracy =
      report.n_images == 0 ? 0.0 : static_cast<double>(report.n_correct) / static_cast<double>(report.n_images);
  return report;
}

EvalReport evaluate_dataset(const std::map<std::string, GraspRect5>& preds,
                            const std::map<std::string, std::vector<GraspRect5>>& annotations,
                            const EvalConfig& cfg) {
  std::map<std::string, GraspRegion> p;
  for (const auto& [id, r] : preds) p.emplace(id, GraspRegion::from_rect5(r));
  std::map<std::string, std::vector<GraspRegion>> a;
  for (const auto& [id, list] : annotations) {
    auto& out = a[id];
    for (const auto& r : list) out.push_back(GraspRegion::from_rect5(r));
  }
  return evaluate_dataset(p, a, cfg);
}

}  // namespace graspkit
