#include <atomic>
#include <cstdlib>
#include <string_view>
#include <vector>

#include "kernels_internal.hpp"

namespace graspkit::simd {
namespace {

bool cpu_has_avx2() {
#if defined(GRASPKIT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Kernels* select_default() {
  if (const char* env = std::getenv("GRASPKIT_SIMD"); env && std::string_view(env) == "scalar") {
    return &detail::kScalarKernels;
  }
  if (const Kernels* k = avx2_kernels()) return k;
  return &detail::kScalarKernels;
}

std::atomic<const Kernels*>& slot() {
  static std::atomic<const Kernels*> current{select_default()};
  return current;
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
  }
  return "unknown";
}

const Kernels& scalar_kernels() { return detail::kScalarKernels; }

const Kernels* avx2_kernels() {
#if defined(GRASPKIT_HAVE_AVX2)
  static const bool ok = cpu_has_avx2();
  return ok ? &detail::kAvx2Kernels : nullptr;
#else
  return nullptr;
#endif
}

const Kernels& active() { return *slot().load(std::memory_order_acquire); }

bool set_active(Isa isa) {
  const Kernels* k = isa == Isa::kScalar ? &detail::kScalarKernels : avx2_kernels();
  if (!k) return false;
  slot().store(k, std::memory_order_release);
  return true;
}

std::span<const Kernels* const> available() {
  static const std::vector<const Kernels*> tables = [] {
    std::vector<const Kernels*> v{&detail::kScalarKernels};
    if (const Kernels* k = avx2_kernels()) v.push_back(k);
    return v;
  }();
  return tables;
}

}  // namespace graspkit::simd
