#pragma once
// Command-line front end. run_cli is the whole program minus process setup,
// so tests can drive it in-process.
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "graspkit/antipodal.hpp"
#include "graspkit/camera.hpp"
#include "graspkit/point_cloud.hpp"

namespace graspkit {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitNoGrasp = 3;

/// args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "x1,y1 x2,y2 ..." -> pixel polygon. Throws InvalidArgument.
std::vector<Vec2> parse_pixel_polygon(const std::string& text);

/// One line: pose=<12 numbers> cost=... seed_index=... orientation=... opening=...
std::string format_candidate(const GraspCandidate& c);

struct TimingStats {
  std::vector<double> seconds;
  double mean = 0.0;
  double stddev = 0.0;
  double median = 0.0;
};

struct BenchResult {
  TimingStats full;
  TimingStats cropped;
  std::size_t full_points = 0;
  std::size_t cropped_points = 0;
  double full_cost = 0.0;
  double cropped_cost = 0.0;
  /// full median / cropped median
  double speedup = 0.0;
};

/// Times the whole grasp search (normals plus candidates) on the full cloud
/// and on the crop with the same budget and approach reference. Either side
/// failing propagates its exception.
BenchResult run_bench(const PointCloud& cloud, const WorldRegion& region, const SamplerConfig& cfg,
                      const GripperModel& g, std::size_t repeat);

/// 768 whitespace-separated numbers; '#' starts a comment.
std::vector<float> parse_feature_text(const std::string& text);

}  // namespace graspkit
