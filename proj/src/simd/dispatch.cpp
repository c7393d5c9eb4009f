#include <cstdlib>
#include <string_view>

#include "glnematic/simd.hpp"

namespace glnematic::simd {

#ifndef GLNEMATIC_HAVE_AVX2
const KernelTable* avx2_kernels() { return nullptr; }
#endif

const KernelTable& active_kernels() {
  static const KernelTable& chosen = [] () -> const KernelTable& {
    const char* env = std::getenv("GLNEMATIC_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar") return scalar_kernels();
    if (const KernelTable* avx = avx2_kernels()) return *avx;
    return scalar_kernels();
  }();
  return chosen;
}

}  // namespace glnematic::simd
