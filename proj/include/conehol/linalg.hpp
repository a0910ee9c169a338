#pragma once

// Small dense linear algebra (dimensions up to a few hundred).

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace conehol {

using Vector = std::vector<double>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : r_(rows), c_(cols), a_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  /// Matrix whose columns are the given vectors.
  static Matrix from_columns(const std::vector<Vector>& cols, std::size_t rows);

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }
  double* data() { return a_.data(); }
  const double* data() const { return a_.data(); }
  const std::vector<double>& storage() const { return a_; }

  Vector col(std::size_t j) const;
  Vector row(std::size_t i) const;
  void set_col(std::size_t j, const Vector& v);

  Matrix transpose() const;
  double max_abs() const;
  double frobenius() const;

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(double s);

 private:
  std::size_t r_ = 0, c_ = 0;
  std::vector<double> a_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Matrix a, double s);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, const Vector& x);

double dot(const Vector& a, const Vector& b);
double norm(const Vector& a);
double max_abs(const Vector& a);
Vector operator+(Vector a, const Vector& b);
Vector operator-(Vector a, const Vector& b);
Vector operator*(double s, Vector a);

/// g(u, v) = u^T G v
double bilinear(const Matrix& g, const Vector& u, const Vector& v);

struct LU {
  Matrix lu;
  std::vector<std::size_t> perm;
  int sign = 1;
  bool singular = false;
};

LU lu_decompose(const Matrix& a);
double determinant(const Matrix& a);
Vector lu_solve(const LU& f, const Vector& b);
Matrix inverse(const Matrix& a);  // throws NumericalError when singular

struct SymEigen {
  Vector values;   // ascending
  Matrix vectors;  // columns
};
/// Cyclic Jacobi eigen-solver for symmetric matrices.
SymEigen sym_eigen(const Matrix& a);

struct SVD {
  Vector sigma;  // descending
  Matrix v;      // right singular vectors as columns
};
/// One-sided Jacobi SVD (singular values and right singular vectors).
SVD svd(const Matrix& a);

/// Orthonormal basis (columns) of the kernel: right singular vectors with
/// sigma <= rel_tol * max(sigma) (or <= abs_floor).
std::vector<Vector> null_space(const Matrix& a, double rel_tol, double abs_floor = 0.0);
std::size_t rank(const Matrix& a, double rel_tol);

/// Eigenvalues of a general real square matrix (Hessenberg + shifted QR).
std::vector<std::complex<double>> eigenvalues(const Matrix& a);

/// Euclidean orthonormal basis of span(vectors) by modified Gram-Schmidt with
/// re-orthogonalisation; vectors whose residual falls below tol*|v| are dropped.
std::vector<Vector> orthonormal_basis(const std::vector<Vector>& vectors, double tol);

}  // namespace conehol
