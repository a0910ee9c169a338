#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

#include "conehol/errors.hpp"
#include "conehol/linalg.hpp"
#include "conehol/parallel.hpp"
#include "conehol/random.hpp"
#include "doctest.h"

using namespace conehol;

namespace {

Matrix random_matrix(Rng& rng, std::size_t r, std::size_t c) {
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rng.uniform(-1.0, 1.0);
  return m;
}

}  // namespace

TEST_SUITE("linalg") {
  TEST_CASE("products and shapes") {
    const Matrix a{{1, 2}, {3, 4}};
    const Matrix b{{0, 1}, {1, 0}};
    const Matrix ab = a * b;
    CHECK(ab(0, 0) == 2.0);
    CHECK(ab(1, 1) == 3.0);
    CHECK((a * Vector{1, 1})[1] == 7.0);
    CHECK(bilinear(a, {1, 0}, {0, 1}) == 2.0);
    CHECK_THROWS_AS(a * Matrix(3, 3), DimensionError);
    CHECK_THROWS_AS((Matrix{{1, 2}, {3}}), DimensionError);
  }

  TEST_CASE("determinant, solve and inverse") {
    const Matrix a{{2, 1, 0}, {1, 3, 1}, {0, 1, 4}};
    CHECK(determinant(a) == doctest::Approx(18.0));
    const Vector x = lu_solve(lu_decompose(a), {1, 2, 3});
    CHECK(max_abs(a * x - Vector{1, 2, 3}) < 1e-14);
    CHECK((a * inverse(a) - Matrix::identity(3)).max_abs() < 1e-14);
    CHECK(determinant(Matrix{{0, 1}, {1, 0}}) == -1.0);
    CHECK_THROWS_AS(inverse(Matrix{{1, 2}, {2, 4}}), NumericalError);
  }

  TEST_CASE("symmetric eigen-decomposition") {
    Rng rng(3);
    Matrix m = random_matrix(rng, 6, 6);
    const Matrix s = m + m.transpose();
    const SymEigen e = sym_eigen(s);
    CHECK(std::is_sorted(e.values.begin(), e.values.end()));
    for (std::size_t k = 0; k < 6; ++k) {
      const Vector v = e.vectors.col(k);
      CHECK(max_abs(s * v - e.values[k] * v) < 1e-12);
    }
    CHECK((e.vectors.transpose() * e.vectors - Matrix::identity(6)).max_abs() < 1e-12);
  }

  TEST_CASE("singular values, rank and null space") {
    const Matrix a{{1, 2, 3}, {2, 4, 6}, {1, 0, 1}};
    const SVD d = svd(a);
    CHECK(d.sigma[0] >= d.sigma[1]);
    CHECK(d.sigma[2] < 1e-12);
    CHECK(rank(a, 1e-10) == 2);
    const auto k = null_space(a, 1e-10);
    REQUIRE(k.size() == 1);
    CHECK(max_abs(a * k[0]) < 1e-12);
    CHECK(norm(k[0]) == doctest::Approx(1.0));
    // Frobenius norm equals the Euclidean norm of the singular values.
    double s2 = 0.0;
    for (double s : d.sigma) s2 += s * s;
    CHECK(std::sqrt(s2) == doctest::Approx(a.frobenius()));
  }

  TEST_CASE("general eigenvalues") {
    const auto ev = eigenvalues(Matrix{{0, -2}, {2, 0}});
    REQUIRE(ev.size() == 2);
    for (const auto& z : ev) {
      CHECK(std::abs(z.real()) < 1e-12);
      CHECK(std::abs(std::abs(z.imag()) - 2.0) < 1e-12);
    }
    auto real = eigenvalues(Matrix{{2, 1, 0}, {0, 3, 1}, {0, 0, 5}});
    std::vector<double> re;
    for (const auto& z : real) re.push_back(z.real());
    std::sort(re.begin(), re.end());
    CHECK(re[0] == doctest::Approx(2.0));
    CHECK(re[2] == doctest::Approx(5.0));
  }

  TEST_CASE("orthonormal basis drops dependent vectors") {
    const auto b = orthonormal_basis({{1, 1, 0}, {2, 2, 1e-13}, {0, 1, 0}, {3, 1, 0}}, 1e-10);
    REQUIRE(b.size() == 2);
    CHECK(std::abs(dot(b[0], b[1])) < 1e-15);
    CHECK(norm(b[1]) == doctest::Approx(1.0));
  }

  TEST_CASE("parallel_for visits every index and rethrows") {
    std::vector<std::atomic<int>> hits(257);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
    CHECK(std::all_of(hits.begin(), hits.end(), [](const auto& h) { return h.load() == 1; }));
    CHECK_THROWS_AS(parallel_for(50,
                                 [](std::size_t i) {
                                   if (i == 31) throw NumericalError("boom");
                                 }),
                    NumericalError);
    CHECK(thread_count() >= 1);
  }
}
