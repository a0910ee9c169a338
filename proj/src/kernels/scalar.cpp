#include "kernels_impl.hpp"

namespace conehol::kernels::scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void gemv(const double* a, const double* x, double* y, std::size_t m, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) y[i] = dot(a + i * n, x, n);
}

void gemm(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m * n; ++i) c[i] = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t p = 0; p < k; ++p) axpy(a[i * k + p], b + p * n, c + i * n, n);
}

void contract(const double* g, const double* v, const double* w, double* out, std::size_t n) {
  double tmp[64];
  for (std::size_t k = 0; k < n; ++k) {
    gemv(g + k * n * n, w, tmp, n, n);
    out[k] = dot(v, tmp, n);
  }
}

}  // namespace conehol::kernels::scalar
