#include <algorithm>
#include <chrono>
#include <cmath>

#include "graspkit/cli.hpp"
#include "graspkit/errors.hpp"

namespace graspkit {
namespace {

TimingStats summarize(std::vector<double> seconds) {
  TimingStats t;
  t.seconds = seconds;
  double sum = 0.0;
  for (double s : seconds) sum += s;
  t.mean = sum / static_cast<double>(seconds.size());
  double var = 0.0;
  for (double s : seconds) var += (s - t.mean) * (s - t.mean);
  t.stddev = seconds.size() > 1 ? std::sqrt(var / static_cast<double>(seconds.size() - 1)) : 0.0;
  std::sort(seconds.begin(), seconds.end());
  const std::size_t n = seconds.size();
  t.median = n % 2 ? seconds[n / 2] : 0.5 * (seconds[n / 2 - 1] + seconds[n / 2]);
  return t;
}

template <typename F>
double time_once(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

BenchResult run_bench(const PointCloud& cloud, const WorldRegion& region, const SamplerConfig& cfg,
                      const GripperModel& g, std::size_t repeat) {
  if (repeat == 0) throw Error(ErrorCode::kInvalidArgument, "repeat must be at least 1");
  BenchResult r;
  r.full_points = cloud.size();
  r.cropped_points = region.select(cloud.soa()).size();
  std::vector<double> full, cropped;
  // Interleaved so slow drift in machine load hits both sides alike.
  for (std::size_t i = 0; i < repeat; ++i) {
    full.push_back(time_once([&] {
      const GraspWorkspace ws(cloud, cfg.patch);
      r.full_cost = search_grasps(ws, cfg, g, -region.axis()).cost;
    }));
    cropped.push_back(time_once([&] { r.cropped_cost = best_grasp(cloud, region, cfg, g).cost; }));
  }
  r.full = summarize(std::move(full));
  r.cropped = summarize(std::move(cropped));
  r.speedup = r.full.median / r.cropped.median;
  return r;
}

}  // namespace graspkit
