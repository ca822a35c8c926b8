#pragma once

// Data-parallel inner loops behind a runtime-selected kernel table. Every
// kernel has a scalar reference; vector variants are equivalence-tested
// against it. Double-precision kernels avoid fused multiply-add and keep the
// scalar operation order, so their results are bit-identical to the scalar
// reference. Single-precision kernels reassociate sums and agree to rounding.

#include <cstddef>
#include <span>
#include <string_view>

#include "graspkit/vec.hpp"

namespace graspkit::simd {

enum class Isa { kScalar, kAvx2 };

std::string_view to_string(Isa isa);

/// Structure-of-arrays view over 3-D points.
struct PointsSoA {
  const double* x = nullptr;
  const double* y = nullptr;
  const double* z = nullptr;
  std::size_t size = 0;

  PointsSoA subrange(std::size_t begin, std::size_t end) const {
    return {x + begin, y + begin, z + begin, end - begin};
  }
};

struct Kernels {
  Isa isa;
  /// sum_i a[i] * b[i]
  float (*dot_f32)(const float* a, const float* b, std::size_t n);
  /// y[i] += alpha * x[i]
  void (*axpy_f32)(float alpha, const float* x, float* y, std::size_t n);
  /// y = W x (+ bias); W is rows x cols row-major, bias may be null.
  void (*gemv_f32)(const float* w, std::size_t rows, std::size_t cols, const float* x, const float* bias,
                   float* y);
  /// out[i] = (x-qx)^2 + (y-qy)^2 + (z-qz)^2, summed left to right.
  void (*squared_distance_f64)(PointsSoA pts, Vec3 q, double* out);
  /// out[i] = nx*(x-ox) + ny*(y-oy) + nz*(z-oz), summed left to right.
  void (*plane_offset_f64)(PointsSoA pts, Vec3 origin, Vec3 normal, double* out);
  /// Coordinates of p - origin along three axes (each computed as plane_offset).
  void (*to_frame_f64)(PointsSoA pts, Vec3 origin, Vec3 ax, Vec3 ay, Vec3 az, double* lx, double* ly, double* lz);
};

const Kernels& scalar_kernels();
/// Null when the binary or the CPU lacks AVX2+FMA.
const Kernels* avx2_kernels();

/// Kernel table in use. Chosen once from CPU features; GRASPKIT_SIMD=scalar
/// forces the reference path.
const Kernels& active();
/// Overrides the selection (tests and benchmarks). Returns false when the
/// requested ISA is unavailable, leaving the selection unchanged.
bool set_active(Isa isa);

/// All kernel tables usable on this machine, scalar first.
std::span<const Kernels* const> available();

}  // namespace graspkit::simd
