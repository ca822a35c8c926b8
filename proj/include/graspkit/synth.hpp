#pragma once
// Synthetic scenes with analytic grasp truths. Shapes are built in a local
// frame centered at the origin, mapped through `pose`, then perturbed by
// isotropic Gaussian noise.
#include <cstdint>
#include <string>

#include "graspkit/camera.hpp"
#include "graspkit/point_cloud.hpp"

namespace graspkit {

struct SynthOptions {
  double density = 1e5;      ///< points per square meter of surface
  double noise_sigma = 0.0;  ///< meters, per coordinate
  std::uint64_t seed = 0;
  double max_opening = 0.08;  ///< decides the graspable flag
  void validate() const;
};

struct SynthTruth {
  Vec3 center;
  /// Box: normal of the two faces across the smallest side. Cylinder: the
  /// cylinder axis (any closing axis perpendicular to it is correct). Plane:
  /// the plane normal. Sphere: zero.
  Vec3 axis;
  double width = 0.0;  ///< box smallest side, cylinder or sphere diameter; 0 for a plane
  bool graspable = false;
};

struct SyntheticScene {
  std::string shape;
  PointCloud cloud;
  SynthTruth truth;
};

/// Box with sides (w, d, h) along local x, y, z; the per-face point count is
/// Poisson with mean density * face area.
SyntheticScene gen_box_scene(double w, double d, double h, const RigidPose& pose, const SynthOptions& opt);
/// Cylinder about local z, lateral surface plus both caps.
SyntheticScene gen_cylinder_scene(double radius, double length, const RigidPose& pose, const SynthOptions& opt);
/// Rectangle (sx, sy) in the local z = 0 plane.
SyntheticScene gen_plane_patch(double sx, double sy, const RigidPose& pose, const SynthOptions& opt);
SyntheticScene gen_sphere_scene(double radius, const RigidPose& pose, const SynthOptions& opt);

/// Points of `a` followed by points of `b`; normals are dropped unless both have them.
PointCloud concat(const PointCloud& a, const PointCloud& b);

}  // namespace graspkit
