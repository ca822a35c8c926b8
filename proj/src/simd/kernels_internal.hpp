#pragma once

#include "graspkit/simd.hpp"

namespace graspkit::simd::detail {

extern const Kernels kScalarKernels;
#if defined(GRASPKIT_HAVE_AVX2)
extern const Kernels kAvx2Kernels;
#endif

}  // namespace graspkit::simd::detail
