#include <cmath>
#include <vector>

#include "conehol/kernels.hpp"
#include "conehol/random.hpp"
#include "doctest.h"

using namespace conehol;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(-2.0, 2.0);
  return v;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Sizes around the 4-wide vector length and its tails.
const std::size_t kSizes[] = {1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 33, 100};

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("scalar reference values") {
    const auto& s = kernels::scalar_table();
    const double a[] = {1, 2, 3}, b[] = {4, -5, 6};
    CHECK(s.dot(a, b, 3) == 12.0);
    double y[] = {1, 1, 1};
    s.axpy(2.0, a, y, 3);
    CHECK(y[2] == 7.0);
    const double m[] = {1, 2, 3, 4, 5, 6};
    double out[2];
    s.gemv(m, a, out, 2, 3);
    CHECK(out[0] == 14.0);
    CHECK(out[1] == 32.0);
    double c[4];
    const double bm[] = {1, 0, 0, 1, 1, 1};
    s.gemm(m, bm, c, 2, 3, 2);
    CHECK(c[0] == 4.0);
    CHECK(c[1] == 5.0);
    CHECK(c[3] == 11.0);
    // G[k][i][j] = delta_ki delta_ij gives out[k] = v[k] w[k].
    std::vector<double> g(27, 0.0);
    for (int k = 0; k < 3; ++k) g[static_cast<std::size_t>(k * 9 + k * 3 + k)] = 1.0;
    double o[3];
    s.contract(g.data(), a, b, o, 3);
    CHECK(o[1] == -10.0);
  }

  TEST_CASE("avx2 kernels match the scalar reference") {
    const kernels::KernelTable* fast = kernels::avx2_table();
    if (fast == nullptr) {
      MESSAGE("AVX2 unavailable; equivalence not exercised");
      return;
    }
    const auto& s = kernels::scalar_table();
    Rng rng(17);
    for (std::size_t n : kSizes) {
      CAPTURE(n);
      const auto a = random_vec(rng, n), b = random_vec(rng, n);
      CHECK(std::abs(fast->dot(a.data(), b.data(), n) - s.dot(a.data(), b.data(), n)) <= 1e-13 * n);

      auto y1 = random_vec(rng, n);
      auto y2 = y1;
      s.axpy(0.7, a.data(), y1.data(), n);
      fast->axpy(0.7, a.data(), y2.data(), n);
      CHECK(max_diff(y1, y2) <= 1e-15);

      for (std::size_t m : {std::size_t{1}, std::size_t{3}, n}) {
        const auto mat = random_vec(rng, m * n);
        std::vector<double> o1(m), o2(m);
        s.gemv(mat.data(), a.data(), o1.data(), m, n);
        fast->gemv(mat.data(), a.data(), o2.data(), m, n);
        CHECK(max_diff(o1, o2) <= 1e-13 * n);

        const auto bm = random_vec(rng, n * m);
        std::vector<double> c1(m * m), c2(m * m);
        s.gemm(mat.data(), bm.data(), c1.data(), m, n, m);
        fast->gemm(mat.data(), bm.data(), c2.data(), m, n, m);
        CHECK(max_diff(c1, c2) <= 1e-13 * n);
      }

      if (n <= 17) {
        const auto g = random_vec(rng, n * n * n);
        std::vector<double> o1(n), o2(n);
        s.contract(g.data(), a.data(), b.data(), o1.data(), n);
        fast->contract(g.data(), a.data(), b.data(), o2.data(), n);
        CHECK(max_diff(o1, o2) <= 1e-12 * n);
      }
    }
  }

  TEST_CASE("active table") {
    const auto& t = kernels::active();
    CHECK((t.name == "scalar" || t.name == "avx2"));
    if (kernels::avx2_table() == nullptr) CHECK(t.name == "scalar");
  }
}
