#include <cstdlib>
#include <string_view>

#include "conehol/kernels.hpp"
#include "kernels_impl.hpp"

namespace conehol::kernels {

const KernelTable& scalar_table() {
  static const KernelTable t{"scalar", scalar::dot, scalar::axpy, scalar::gemv, scalar::gemm, scalar::contract};
  return t;
}

const KernelTable* avx2_table() {
#if defined(CONEHOL_HAVE_AVX2)
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  static const KernelTable t{"avx2", avx2::dot, avx2::axpy, avx2::gemv, avx2::gemm, avx2::contract};
  return ok ? &t : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable* chosen = [] {
    const char* env = std::getenv("CONEHOL_KERNELS");
    if (env != nullptr && std::string_view(env) == "scalar") return &scalar_table();
    const KernelTable* fast = avx2_table();
    return fast != nullptr ? fast : &scalar_table();
  }();
  return *chosen;
}

}  // namespace conehol::kernels
