#include "conehol/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "conehol/errors.hpp"
#include "conehol/kernels.hpp"

namespace conehol {

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  r_ = rows.size();
  c_ = r_ ? rows.begin()->size() : 0;
  a_.reserve(r_ * c_);
  for (const auto& row : rows) {
    if (row.size() != c_) throw DimensionError("ragged matrix literal");
    a_.insert(a_.end(), row.begin(), row.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_columns(const std::vector<Vector>& cols, std::size_t rows) {
  Matrix m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) m.set_col(j, cols[j]);
  return m;
}

Vector Matrix::col(std::size_t j) const {
  Vector v(r_);
  for (std::size_t i = 0; i < r_; ++i) v[i] = (*this)(i, j);
  return v;
}

Vector Matrix::row(std::size_t i) const { return Vector(a_.begin() + i * c_, a_.begin() + (i + 1) * c_); }

void Matrix::set_col(std::size_t j, const Vector& v) {
  if (v.size() != r_) throw DimensionError("column length mismatch");
  for (std::size_t i = 0; i < r_; ++i) (*this)(i, j) = v[i];
}

Matrix Matrix::transpose() const {
  Matrix t(c_, r_);
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double x : a_) m = std::max(m, std::abs(x));
  return m;
}

double Matrix::frobenius() const { return std::sqrt(kernels::active().dot(a_.data(), a_.data(), a_.size())); }

Matrix& Matrix::operator+=(const Matrix& o) {
  if (o.r_ != r_ || o.c_ != c_) throw DimensionError("matrix shape mismatch");
  kernels::active().axpy(1.0, o.a_.data(), a_.data(), a_.size());
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  if (o.r_ != r_ || o.c_ != c_) throw DimensionError("matrix shape mismatch");
  kernels::active().axpy(-1.0, o.a_.data(), a_.data(), a_.size());
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& x : a_) x *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(Matrix a, double s) { return a *= s; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matrix product shape mismatch");
  Matrix c(a.rows(), b.cols());
  kernels::active().gemm(a.data(), b.data(), c.data(), a.rows(), a.cols(), b.cols());
  return c;
}

Vector operator*(const Matrix& a, const Vector& x) {
  if (a.cols() != x.size()) throw DimensionError("matrix-vector shape mismatch");
  Vector y(a.rows());
  kernels::active().gemv(a.data(), x.data(), y.data(), a.rows(), a.cols());
  return y;
}

double dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DimensionError("dot length mismatch");
  return kernels::active().dot(a.data(), b.data(), a.size());
}

double norm(const Vector& a) { return std::sqrt(dot(a, a)); }

double max_abs(const Vector& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

Vector operator+(Vector a, const Vector& b) {
  if (a.size() != b.size()) throw DimensionError("vector length mismatch");
  kernels::active().axpy(1.0, b.data(), a.data(), a.size());
  return a;
}

Vector operator-(Vector a, const Vector& b) {
  if (a.size() != b.size()) throw DimensionError("vector length mismatch");
  kernels::active().axpy(-1.0, b.data(), a.data(), a.size());
  return a;
}

Vector operator*(double s, Vector a) {
  for (double& x : a) x *= s;
  return a;
}

double bilinear(const Matrix& g, const Vector& u, const Vector& v) { return dot(u, g * v); }

LU lu_decompose(const Matrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("LU of non-square matrix");
  const std::size_t n = a.rows();
  LU f{a, std::vector<std::size_t>(n), 1, false};
  std::iota(f.perm.begin(), f.perm.end(), 0);
  Matrix& m = f.lu;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(m(i, k)) > std::abs(m(p, k))) p = i;
    if (m(p, k) == 0.0) {
      f.singular = true;
      continue;
    }
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(k, j));
      std::swap(f.perm[p], f.perm[k]);
      f.sign = -f.sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double l = m(i, k) / m(k, k);
      m(i, k) = l;
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= l * m(k, j);
    }
  }
  return f;
}

double determinant(const Matrix& a) {
  if (a.rows() == 0) return 1.0;
  const LU f = lu_decompose(a);
  if (f.singular) return 0.0;
  double d = f.sign;
  for (std::size_t i = 0; i < a.rows(); ++i) d *= f.lu(i, i);
  return d;
}

Vector lu_solve(const LU& f, const Vector& b) {
  if (f.singular) throw NumericalError("singular matrix");
  const std::size_t n = f.lu.rows();
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[f.perm[i]];
    for (std::size_t j = 0; j < i; ++j) s -= f.lu(i, j) * x[j];
    x[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = x[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= f.lu(i, j) * x[j];
    x[i] = s / f.lu(i, i);
  }
  return x;
}

Matrix inverse(const Matrix& a) {
  const LU f = lu_decompose(a);
  if (f.singular) throw NumericalError("singular matrix");
  const std::size_t n = a.rows();
  Matrix inv(n, n);
  Vector e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    inv.set_col(j, lu_solve(f, e));
    e[j] = 0.0;
  }
  return inv;
}

SymEigen sym_eigen(const Matrix& input) {
  const std::size_t n = input.rows();
  Matrix a = input;
  Matrix v = Matrix::identity(n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0, diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      diag += a(i, i) * a(i, i);
      for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    }
    if (off <= 1e-30 * std::max(diag, 1e-300)) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });
  SymEigen out{Vector(n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(idx[k], idx[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, idx[k]);
  }
  return out;
}

SVD svd(const Matrix& input) {
  const std::size_t m = input.rows(), n = input.cols();
  // Work on columns stored contiguously.
  std::vector<Vector> cols(n, Vector(m));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i) cols[j][i] = input(i, j);
  std::vector<Vector> vcols(n, Vector(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) vcols[j][j] = 1.0;
  const auto& k = kernels::active();
  for (int sweep = 0; sweep < 80; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = k.dot(cols[p].data(), cols[p].data(), m);
        const double beta = k.dot(cols[q].data(), cols[q].data(), m);
        const double gamma = k.dot(cols[p].data(), cols[q].data(), m);
        if (gamma == 0.0 || std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double x = cols[p][i], y = cols[q][i];
          cols[p][i] = c * x - s * y;
          cols[q][i] = s * x + c * y;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double x = vcols[p][i], y = vcols[q][i];
          vcols[p][i] = c * x - s * y;
          vcols[q][i] = s * x + c * y;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<double> sig(n);
  for (std::size_t j = 0; j < n; ++j) sig[j] = std::sqrt(k.dot(cols[j].data(), cols[j].data(), m));
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return sig[x] > sig[y]; });
  SVD out{Vector(n), Matrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    out.sigma[j] = sig[idx[j]];
    out.v.set_col(j, vcols[idx[j]]);
  }
  return out;
}

std::vector<Vector> null_space(const Matrix& a, double rel_tol, double abs_floor) {
  const SVD s = svd(a);
  const double smax = s.sigma.empty() ? 0.0 : s.sigma.front();
  const double thr = std::max(rel_tol * smax, abs_floor);
  std::vector<Vector> out;
  for (std::size_t j = 0; j < s.sigma.size(); ++j)
    if (s.sigma[j] <= thr) out.push_back(s.v.col(j));
  return out;
}

std::size_t rank(const Matrix& a, double rel_tol) {
  const SVD s = svd(a);
  if (s.sigma.empty() || s.sigma.front() == 0.0) return 0;
  std::size_t r = 0;
  for (double x : s.sigma)
    if (x > rel_tol * s.sigma.front()) ++r;
  return r;
}

namespace {

void to_hessenberg(Matrix& a) {
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double alpha = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) alpha += a(i, k) * a(i, k);
    alpha = std::sqrt(alpha);
    if (alpha == 0.0) continue;
    if (a(k + 1, k) > 0) alpha = -alpha;
    Vector v(n, 0.0);
    for (std::size_t i = k + 1; i < n; ++i) v[i] = a(i, k);
    v[k + 1] -= alpha;
    double vn = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vn += v[i] * v[i];
    if (vn == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) s += v[i] * a(i, j);
      s = 2.0 * s / vn;
      for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= s * v[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) s += a(i, j) * v[j];
      s = 2.0 * s / vn;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= s * v[j];
    }
  }
}

double sign_of(double a, double b) { return b >= 0.0 ? std::abs(a) : -std::abs(a); }

}  // namespace

std::vector<std::complex<double>> eigenvalues(const Matrix& input) {
  if (input.rows() != input.cols()) throw DimensionError("eigenvalues of non-square matrix");
  const int n = static_cast<int>(input.rows());
  std::vector<std::complex<double>> out(static_cast<std::size_t>(n));
  if (n == 0) return out;
  Matrix a = input;
  to_hessenberg(a);
  auto A = [&](int i, int j) -> double& { return a(static_cast<std::size_t>(i), static_cast<std::size_t>(j)); };
  std::vector<double> wr(static_cast<std::size_t>(n)), wi(static_cast<std::size_t>(n));
  double anorm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(A(i, j));
  int nn = n - 1;
  double t = 0.0;
  int its = 0;
  while (nn >= 0) {
    int l;
    for (l = nn; l >= 1; --l) {
      double s = std::abs(A(l - 1, l - 1)) + std::abs(A(l, l));
      if (s == 0.0) s = anorm;
      if (std::abs(A(l, l - 1)) + s == s) {
        A(l, l - 1) = 0.0;
        break;
      }
    }
    double x = A(nn, nn);
    if (l == nn) {
      wr[nn] = x + t;
      wi[nn] = 0.0;
      --nn;
      its = 0;
      continue;
    }
    double y = A(nn - 1, nn - 1);
    double w = A(nn, nn - 1) * A(nn - 1, nn);
    if (l == nn - 1) {
      const double p = 0.5 * (y - x);
      const double q = p * p + w;
      double z = std::sqrt(std::abs(q));
      x += t;
      if (q >= 0.0) {
        z = p + sign_of(z, p);
        wr[nn - 1] = wr[nn] = x + z;
        if (z != 0.0) wr[nn] = x - w / z;
        wi[nn - 1] = wi[nn] = 0.0;
      } else {
        wr[nn - 1] = wr[nn] = x + p;
        wi[nn - 1] = -z;
        wi[nn] = z;
      }
      nn -= 2;
      its = 0;
      continue;
    }
    if (its == 60) throw NumericalError("eigenvalue iteration did not converge");
    if (its == 10 || its == 20 || its == 40) {
      t += x;
      for (int i = 0; i <= nn; ++i) A(i, i) -= x;
      const double s = std::abs(A(nn, nn - 1)) + std::abs(A(nn - 1, nn - 2));
      y = x = 0.75 * s;
      w = -0.4375 * s * s;
    }
    ++its;
    int m;
    double p = 0, q = 0, r = 0, z;
    for (m = nn - 2; m >= l; --m) {
      z = A(m, m);
      r = x - z;
      const double s0 = y - z;
      p = (r * s0 - w) / A(m + 1, m) + A(m, m + 1);
      q = A(m + 1, m + 1) - z - r - s0;
      r = A(m + 2, m + 1);
      const double s = std::abs(p) + std::abs(q) + std::abs(r);
      p /= s;
      q /= s;
      r /= s;
      if (m == l) break;
      const double u = std::abs(A(m, m - 1)) * (std::abs(q) + std::abs(r));
      const double v = std::abs(p) * (std::abs(A(m - 1, m - 1)) + std::abs(z) + std::abs(A(m + 1, m + 1)));
      if (u + v == v) break;
    }
    for (int i = m + 2; i <= nn; ++i) {
      A(i, i - 2) = 0.0;
      if (i != m + 2) A(i, i - 3) = 0.0;
    }
    for (int k = m; k <= nn - 1; ++k) {
      if (k != m) {
        p = A(k, k - 1);
        q = A(k + 1, k - 1);
        r = 0.0;
        if (k != nn - 1) r = A(k + 2, k - 1);
        x = std::abs(p) + std::abs(q) + std::abs(r);
        if (x != 0.0) {
          p /= x;
          q /= x;
          r /= x;
        }
      }
      const double s = sign_of(std::sqrt(p * p + q * q + r * r), p);
      if (s != 0.0) {
        if (k == m) {
          if (l != m) A(k, k - 1) = -A(k, k - 1);
        } else {
          A(k, k - 1) = -s * x;
        }
        p += s;
        x = p / s;
        y = q / s;
        z = r / s;
        q /= p;
        r /= p;
        for (int j = k; j <= nn; ++j) {
          p = A(k, j) + q * A(k + 1, j);
          if (k != nn - 1) {
            p += r * A(k + 2, j);
            A(k + 2, j) -= p * z;
          }
          A(k + 1, j) -= p * y;
          A(k, j) -= p * x;
        }
        const int mmin = nn < k + 3 ? nn : k + 3;
        for (int i = l; i <= mmin; ++i) {
          p = x * A(i, k) + y * A(i, k + 1);
          if (k != nn - 1) {
            p += z * A(i, k + 2);
            A(i, k + 2) -= p * r;
          }
          A(i, k + 1) -= p * q;
          A(i, k) -= p;
        }
      }
    }
  }
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = {wr[i], wi[i]};
  std::sort(out.begin(), out.end(), [](const auto& u, const auto& v) {
    return u.real() != v.real() ? u.real() < v.real() : u.imag() < v.imag();
  });
  return out;
}

std::vector<Vector> orthonormal_basis(const std::vector<Vector>& vectors, double tol) {
  std::vector<Vector> basis;
  for (const Vector& v0 : vectors) {
    const double n0 = norm(v0);
    if (n0 == 0.0) continue;
    Vector v = v0;
    for (int pass = 0; pass < 2; ++pass)
      for (const Vector& b : basis) v = v - dot(b, v) * b;
    const double nv = norm(v);
    if (nv > tol * n0) basis.push_back((1.0 / nv) * v);
  }
  return basis;
}

}  // namespace conehol
