#pragma once

// Dense numeric kernels with a scalar reference implementation and an AVX2
// variant chosen once at runtime. Set CONEHOL_KERNELS=scalar to force the
// reference path.

#include <cstddef>
#include <string_view>

namespace conehol::kernels {

struct KernelTable {
  std::string_view name;
  double (*dot)(const double* a, const double* b, std::size_t n);
  /// y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  /// y = A x, A row-major m x n
  void (*gemv)(const double* a, const double* x, double* y, std::size_t m, std::size_t n);
  /// C = A B, row-major, A m x k, B k x n
  void (*gemm)(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n);
  /// out[k] = sum_ij G[k][i][j] v[i] w[j], G laid out n x n x n
  void (*contract)(const double* g, const double* v, const double* w, double* out, std::size_t n);
};

const KernelTable& scalar_table();
/// nullptr when the CPU or the build lacks AVX2/FMA.
const KernelTable* avx2_table();
const KernelTable& active();

}  // namespace conehol::kernels
