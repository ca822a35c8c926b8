#pragma once
// Run configuration: `section.key = value` lines, `#` comments. Every key is
// checked against a fixed schema; unknown keys and bad values are errors.
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "graspkit/antipodal.hpp"
#include "graspkit/camera.hpp"
#include "graspkit/fvit.hpp"
#include "graspkit/metric.hpp"
#include "graspkit/synth.hpp"

namespace graspkit {

class RunConfig {
 public:
  RunConfig() = default;

  /// Throws Config (as LineError) naming the offending line.
  static RunConfig parse(std::string_view text);
  static RunConfig load(const std::filesystem::path& path);

  /// Sets one key (command-line override). Throws Config for unknown keys or
  /// values that do not match the key's type.
  void set(const std::string& key, const std::string& value);
  /// "section.key=value"
  void set_assignment(const std::string& assignment);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  double get_double(const std::string& key, double fallback) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  CameraIntrinsics intrinsics() const;
  RigidPose camera_pose() const;
  ZBand band() const;
  GripperModel gripper() const;
  SamplerConfig sampler() const;
  EvalConfig eval() const;
  SynthOptions synth() const;
  HiLoConfig hilo() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace graspkit
