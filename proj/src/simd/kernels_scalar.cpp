#include "kernels_internal.hpp"

namespace graspkit::simd::detail {
namespace {

float dot_f32(const float* a, const float* b, std::size_t n) {
  float acc = 0.0f;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_f32(float alpha, const float* x, float* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void gemv_f32(const float* w, std::size_t rows, std::size_t cols, const float* x, const float* bias, float* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    const float v = dot_f32(w + r * cols, x, cols);
    y[r] = bias ? v + bias[r] : v;
  }
}

void squared_distance_f64(PointsSoA pts, Vec3 q, double* out) {
  for (std::size_t i = 0; i < pts.size; ++i) {
    const double dx = pts.x[i] - q.x;
    const double dy = pts.y[i] - q.y;
    const double dz = pts.z[i] - q.z;
    out[i] = dx * dx + dy * dy + dz * dz;
  }
}

void plane_offset_f64(PointsSoA pts, Vec3 o, Vec3 n, double* out) {
  for (std::size_t i = 0; i < pts.size; ++i) {
    out[i] = n.x * (pts.x[i] - o.x) + n.y * (pts.y[i] - o.y) + n.z * (pts.z[i] - o.z);
  }
}

void to_frame_f64(PointsSoA pts, Vec3 o, Vec3 ax, Vec3 ay, Vec3 az, double* lx, double* ly, double* lz) {
  for (std::size_t i = 0; i < pts.size; ++i) {
    const double dx = pts.x[i] - o.x;
    const double dy = pts.y[i] - o.y;
    const double dz = pts.z[i] - o.z;
    lx[i] = ax.x * dx + ax.y * dy + ax.z * dz;
    ly[i] = ay.x * dx + ay.y * dy + ay.z * dz;
    lz[i] = az.x * dx + az.y * dy + az.z * dz;
  }
}

}  // namespace

const Kernels kScalarKernels{Isa::kScalar, dot_f32, axpy_f32, gemv_f32, squared_distance_f64, plane_offset_f64,
                             to_frame_f64};

}  // namespace graspkit::simd::detail
