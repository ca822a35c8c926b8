// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include "kernels_internal.hpp"

namespace graspkit::simd::detail {
namespace {

inline float hsum(__m256 v) {
  const __m128 lo = _mm256_castps256_ps128(v);
  const __m128 hi = _mm256_extractf128_ps(v, 1);
  __m128 s = _mm_add_ps(lo, hi);
  s = _mm_add_ps(s, _mm_movehl_ps(s, s));
  s = _mm_add_ss(s, _mm_shuffle_ps(s, s, 0x55));
  return _mm_cvtss_f32(s);
}

float dot_f32(const float* a, const float* b, std::size_t n) {
  __m256 acc0 = _mm256_setzero_ps();
  __m256 acc1 = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc0);
    acc1 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i + 8), _mm256_loadu_ps(b + i + 8), acc1);
  }
  for (; i + 8 <= n; i += 8) acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc0);
  float acc = hsum(_mm256_add_ps(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_f32(float alpha, const float* x, float* y, std::size_t n) {
  const __m256 va = _mm256_set1_ps(alpha);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_ps(y + i, _mm256_fmadd_ps(va, _mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void gemv_f32(const float* w, std::size_t rows, std::size_t cols, const float* x, const float* bias, float* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    const float v = dot_f32(w + r * cols, x, cols);
    y[r] = bias ? v + bias[r] : v;
  }
}

// The f64 kernels below use separate mul/add in the scalar order.

void squared_distance_f64(PointsSoA pts, Vec3 q, double* out) {
  const __m256d qx = _mm256_set1_pd(q.x), qy = _mm256_set1_pd(q.y), qz = _mm256_set1_pd(q.z);
  std::size_t i = 0;
  for (; i + 4 <= pts.size; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(pts.x + i), qx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(pts.y + i), qy);
    const __m256d dz = _mm256_sub_pd(_mm256_loadu_pd(pts.z + i), qz);
    __m256d s = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    s = _mm256_add_pd(s, _mm256_mul_pd(dz, dz));
    _mm256_storeu_pd(out + i, s);
  }
  for (; i < pts.size; ++i) {
    const double dx = pts.x[i] - q.x;
    const double dy = pts.y[i] - q.y;
    const double dz = pts.z[i] - q.z;
    out[i] = dx * dx + dy * dy + dz * dz;
  }
}

inline __m256d project(__m256d dx, __m256d dy, __m256d dz, Vec3 n) {
  const __m256d s = _mm256_add_pd(_mm256_mul_pd(_mm256_set1_pd(n.x), dx), _mm256_mul_pd(_mm256_set1_pd(n.y), dy));
  return _mm256_add_pd(s, _mm256_mul_pd(_mm256_set1_pd(n.z), dz));
}

void plane_offset_f64(PointsSoA pts, Vec3 o, Vec3 n, double* out) {
  const __m256d ox = _mm256_set1_pd(o.x), oy = _mm256_set1_pd(o.y), oz = _mm256_set1_pd(o.z);
  std::size_t i = 0;
  for (; i + 4 <= pts.size; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(pts.x + i), ox);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(pts.y + i), oy);
    const __m256d dz = _mm256_sub_pd(_mm256_loadu_pd(pts.z + i), oz);
    _mm256_storeu_pd(out + i, project(dx, dy, dz, n));
  }
  for (; i < pts.size; ++i) {
    out[i] = n.x * (pts.x[i] - o.x) + n.y * (pts.y[i] - o.y) + n.z * (pts.z[i] - o.z);
  }
}

void to_frame_f64(PointsSoA pts, Vec3 o, Vec3 ax, Vec3 ay, Vec3 az, double* lx, double* ly, double* lz) {
  const __m256d ox = _mm256_set1_pd(o.x), oy = _mm256_set1_pd(o.y), oz = _mm256_set1_pd(o.z);
  std::size_t i = 0;
  for (; i + 4 <= pts.size; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(pts.x + i), ox);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(pts.y + i), oy);
    const __m256d dz = _mm256_sub_pd(_mm256_loadu_pd(pts.z + i), oz);
    _mm256_storeu_pd(lx + i, project(dx, dy, dz, ax));
    _mm256_storeu_pd(ly + i, project(dx, dy, dz, ay));
    _mm256_storeu_pd(lz + i, project(dx, dy, dz, az));
  }
  for (; i < pts.size; ++i) {
    const double dx = pts.x[i] - o.x;
    const double dy = pts.y[i] - o.y;
    const double dz = pts.z[i] - o.z;
    lx[i] = ax.x * dx + ax.y * dy + ax.z * dz;
    ly[i] = ay.x * dx + ay.y * dy + ay.z * dz;
    lz[i] = az.x * dx + az.y * dy + az.z * dz;
  }
}

}  // namespace

const Kernels kAvx2Kernels{Isa::kAvx2, dot_f32, axpy_f32, gemv_f32, squared_distance_f64, plane_offset_f64,
                           to_frame_f64};

}  // namespace graspkit::simd::detail
