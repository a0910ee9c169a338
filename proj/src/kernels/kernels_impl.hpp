#pragma once

#include <cstddef>

namespace conehol::kernels {

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void gemv(const double* a, const double* x, double* y, std::size_t m, std::size_t n);
void gemm(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n);
void contract(const double* g, const double* v, const double* w, double* out, std::size_t n);
}  // namespace scalar

#if defined(CONEHOL_HAVE_AVX2)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void gemv(const double* a, const double* x, double* y, std::size_t m, std::size_t n);
void gemm(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n);
void contract(const double* g, const double* v, const double* w, double* out, std::size_t n);
}  // namespace avx2
#endif

}  // namespace conehol::kernels
