#include "graspkit/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

#include "graspkit/cornell.hpp"
#include "graspkit/errors.hpp"

namespace graspkit {
namespace {

enum class Kind { kReal, kUint, kBool, kPose };

struct KeySpec {
  const char* key;
  Kind kind;
};

constexpr KeySpec kSchema[] = {
    {"camera.fx", Kind::kReal},
    {"camera.fy", Kind::kReal},
    {"camera.cx", Kind::kReal},
    {"camera.cy", Kind::kReal},
    {"camera.pose", Kind::kPose},
    {"crop.z_min", Kind::kReal},
    {"crop.z_max", Kind::kReal},
    {"cloud.patch_k", Kind::kUint},
    {"cloud.patch_radius", Kind::kReal},
    {"grasp.n_seeds", Kind::kUint},
    {"grasp.n_orientations", Kind::kUint},
    {"grasp.rng_seed", Kind::kUint},
    {"grasp.mu_cos", Kind::kReal},
    {"gripper.max_opening", Kind::kReal},
    {"gripper.finger_thickness", Kind::kReal},
    {"gripper.finger_depth", Kind::kReal},
    {"gripper.palm_clearance", Kind::kReal},
    {"synth.density", Kind::kReal},
    {"synth.noise_sigma", Kind::kReal},
    {"synth.seed", Kind::kUint},
    {"eval.jaccard", Kind::kReal},
    {"eval.angle_deg", Kind::kReal},
    {"eval.angle_check", Kind::kBool},
    {"fvit.dim", Kind::kUint},
    {"fvit.n_heads", Kind::kUint},
    {"fvit.alpha", Kind::kReal},
    {"fvit.window", Kind::kUint},
};

const KeySpec* find_key(std::string_view key) {
  for (const KeySpec& s : kSchema)
    if (key == s.key) return &s;
  return nullptr;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_real(std::string_view s, double& out) {
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && end == s.data() + s.size() && std::isfinite(out);
}

bool parse_uint(std::string_view s, std::uint64_t& out) {
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && end == s.data() + s.size();
}

bool parse_bool(std::string_view s, bool& out) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") {
    out = true;
    return true;
  }
  if (s == "false" || s == "0" || s == "no" || s == "off") {
    out = false;
    return true;
  }
  return false;
}

// Twelve reals separated by spaces and/or commas.
bool parse_pose(std::string_view s, std::array<double, 12>& out) {
  std::size_t n = 0;
  while (true) {
    while (!s.empty() && (s.front() == ' ' || s.front() == ',' || s.front() == '\t')) s.remove_prefix(1);
    if (s.empty()) break;
    std::size_t end = 0;
    while (end < s.size() && s[end] != ' ' && s[end] != ',' && s[end] != '\t') ++end;
    if (n == 12 || !parse_real(s.substr(0, end), out[n])) return false;
    ++n;
    s.remove_prefix(end);
  }
  return n == 12;
}

void check_value(const KeySpec& spec, const std::string& value) {
  bool ok = false;
  switch (spec.kind) {
    case Kind::kReal: {
      double v;
      ok = parse_real(value, v);
      break;
    }
    case Kind::kUint: {
      std::uint64_t v;
      ok = parse_uint(value, v);
      break;
    }
    case Kind::kBool: {
      bool v;
      ok = parse_bool(value, v);
      break;
    }
    case Kind::kPose: {
      std::array<double, 12> v;
      ok = parse_pose(value, v);
      break;
    }
  }
  if (!ok) throw Error(ErrorCode::kConfig, std::string("bad value for ") + spec.key + ": '" + value + "'");
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  const KeySpec* spec = find_key(key);
  if (!spec) throw Error(ErrorCode::kConfig, "unknown key '" + key + "'");
  const std::string v(trim(value));
  check_value(*spec, v);
  values_[key] = v;
}

void RunConfig::set_assignment(const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos) throw Error(ErrorCode::kConfig, "expected key=value, got '" + assignment + "'");
  set(std::string(trim(std::string_view(assignment).substr(0, eq))), assignment.substr(eq + 1));
}

RunConfig RunConfig::parse(std::string_view text) {
  RunConfig cfg;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw LineError(ErrorCode::kConfig, line_no, "expected 'section.key = value'");
    try {
      cfg.set(std::string(trim(line.substr(0, eq))), std::string(line.substr(eq + 1)));
    } catch (const Error& e) {
      throw LineError(ErrorCode::kConfig, line_no, e.what());
    }
  }
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return parse(text);
  } catch (const LineError& e) {
    throw LineError(e.code(), e.line(), path.string() + ": " + e.what());
  }
}

double RunConfig::get_double(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  double v = fallback;
  if (it != values_.end()) parse_real(it->second, v);
  return v;
}

std::uint64_t RunConfig::get_uint(const std::string& key, std::uint64_t fallback) const {
  auto it = values_.find(key);
  std::uint64_t v = fallback;
  if (it != values_.end()) parse_uint(it->second, v);
  return v;
}

bool RunConfig::get_bool(const std::string& key, bool fallback) const {
  auto it = values_.find(key);
  bool v = fallback;
  if (it != values_.end()) parse_bool(it->second, v);
  return v;
}

CameraIntrinsics RunConfig::intrinsics() const {
  for (const char* k : {"camera.fx", "camera.fy", "camera.cx", "camera.cy"})
    if (!has(k)) throw Error(ErrorCode::kConfig, std::string("missing ") + k);
  CameraIntrinsics k{get_double("camera.fx", 0), get_double("camera.fy", 0), get_double("camera.cx", 0),
                     get_double("camera.cy", 0)};
  k.validate();
  return k;
}

RigidPose RunConfig::camera_pose() const {
  auto it = values_.find("camera.pose");
  if (it == values_.end()) return RigidPose::identity();
  std::array<double, 12> v{};
  parse_pose(it->second, v);
  return RigidPose::from_row_major(v);
}

ZBand RunConfig::band() const {
  if (!has("crop.z_min") || !has("crop.z_max")) throw Error(ErrorCode::kConfig, "missing crop.z_min or crop.z_max");
  ZBand b{get_double("crop.z_min", 0), get_double("crop.z_max", 0)};
  b.validate();
  return b;
}

GripperModel RunConfig::gripper() const {
  GripperModel g;
  g.max_opening = get_double("gripper.max_opening", g.max_opening);
  g.finger_thickness = get_double("gripper.finger_thickness", g.finger_thickness);
  g.finger_depth = get_double("gripper.finger_depth", g.finger_depth);
  g.palm_clearance = get_double("gripper.palm_clearance", g.palm_clearance);
  g.mu_cos = get_double("grasp.mu_cos", g.mu_cos);
  g.validate();
  return g;
}

SamplerConfig RunConfig::sampler() const {
  SamplerConfig s;
  s.n_seeds = get_uint("grasp.n_seeds", s.n_seeds);
  s.n_orientations = get_uint("grasp.n_orientations", s.n_orientations);
  s.rng_seed = get_uint("grasp.rng_seed", s.rng_seed);
  s.patch.k = get_uint("cloud.patch_k", s.patch.k);
  s.patch.radius = get_double("cloud.patch_radius", s.patch.radius);
  s.validate();
  return s;
}

EvalConfig RunConfig::eval() const {
  EvalConfig e;
  e.jaccard_threshold = get_double("eval.jaccard", e.jaccard_threshold);
  e.angle_threshold = get_double("eval.angle_deg", 30.0) * std::numbers::pi / 180.0;
  e.angle_check_enabled = get_bool("eval.angle_check", e.angle_check_enabled);
  e.validate();
  return e;
}

SynthOptions RunConfig::synth() const {
  SynthOptions o;
  o.density = get_double("synth.density", o.density);
  o.noise_sigma = get_double("synth.noise_sigma", o.noise_sigma);
  o.seed = get_uint("synth.seed", o.seed);
  o.max_opening = get_double("gripper.max_opening", o.max_opening);
  o.validate();
  return o;
}

HiLoConfig RunConfig::hilo() const {
  HiLoConfig h;
  h.dim = get_uint("fvit.dim", h.dim);
  h.n_heads = get_uint("fvit.n_heads", h.n_heads);
  h.alpha = get_double("fvit.alpha", h.alpha);
  h.window = get_uint("fvit.window", h.window);
  h.validate();
  return h;
}

}  // namespace graspkit
