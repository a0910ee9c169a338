#pragma once

// Forward-mode jets carrying a value, a gradient and (for order 2) the
// upper triangle of the Hessian with respect to up to kMaxDim seeds.

#include <array>
#include <cassert>
#include <cmath>

#include "conehol/errors.hpp"

namespace conehol {

inline constexpr int kMaxDim = 12;
inline constexpr int kMaxHess = kMaxDim * (kMaxDim + 1) / 2;

constexpr int hess_index(int n, int i, int j) {
  if (i > j) {
    const int t = i;
    i = j;
    j = t;
  }
  return i * (2 * n - i + 1) / 2 + (j - i);
}

namespace detail {
template <int Order>
struct HessStore {
  std::array<double, kMaxHess> h;
};
template <>
struct HessStore<1> {};
}  // namespace detail

template <int Order>
class Jet {
  static_assert(Order == 1 || Order == 2, "jets of order 1 or 2 only");

 public:
  static constexpr int order = Order;

  Jet() : v_(0.0), n_(0) {}
  Jet(double value) : v_(value), n_(0) {}  // NOLINT: constants promote implicitly

  /// A constant carrying n zero derivatives.
  Jet(double value, int n) : v_(value), n_(n) {
    assert(n >= 0 && n <= kMaxDim);
    for (int i = 0; i < n; ++i) g_[i] = 0.0;
    if constexpr (Order == 2) {
      for (int i = 0; i < nh(); ++i) hs_.h[i] = 0.0;
    }
  }

  /// The coordinate function x_index with value `value`.
  static Jet variable(double value, int n, int index) {
    Jet j(value, n);
    j.g_[index] = 1.0;
    return j;
  }

  double value() const { return v_; }
  int size() const { return n_; }
  double grad(int i) const { return i < n_ ? g_[i] : 0.0; }
  double hess(int i, int j) const {
    if constexpr (Order == 2) {
      return (i < n_ && j < n_) ? hs_.h[hess_index(n_, i, j)] : 0.0;
    } else {
      (void)i;
      (void)j;
      return 0.0;
    }
  }
  double& grad_ref(int i) { return g_[i]; }

  /// Apply a scalar function given its value and first two derivatives at value().
  Jet chain(double f0, double f1, double f2) const {
    Jet r;
    r.v_ = f0;
    r.n_ = n_;
    for (int i = 0; i < n_; ++i) r.g_[i] = f1 * g_[i];
    if constexpr (Order == 2) {
      int k = 0;
      for (int i = 0; i < n_; ++i)
        for (int j = i; j < n_; ++j, ++k) r.hs_.h[k] = f1 * hs_.h[k] + f2 * g_[i] * g_[j];
    } else {
      (void)f2;
    }
    return r;
  }

  Jet operator-() const {
    Jet r = *this;
    r.v_ = -v_;
    for (int i = 0; i < n_; ++i) r.g_[i] = -g_[i];
    if constexpr (Order == 2) {
      for (int i = 0; i < nh(); ++i) r.hs_.h[i] = -hs_.h[i];
    }
    return r;
  }

  Jet& operator+=(const Jet& o) {
    if (o.n_ == 0) {
      v_ += o.v_;
      return *this;
    }
    if (n_ == 0) {
      const double v = v_;
      *this = o;
      v_ += v;
      return *this;
    }
    assert(n_ == o.n_);
    v_ += o.v_;
    for (int i = 0; i < n_; ++i) g_[i] += o.g_[i];
    if constexpr (Order == 2) {
      for (int i = 0; i < nh(); ++i) hs_.h[i] += o.hs_.h[i];
    }
    return *this;
  }
  Jet& operator-=(const Jet& o) { return *this += -o; }

  Jet& operator*=(const Jet& o) {
    if (o.n_ == 0) return scale(o.v_);
    if (n_ == 0) {
      const double v = v_;
      *this = o;
      return scale(v);
    }
    assert(n_ == o.n_);
    if constexpr (Order == 2) {
      int k = 0;
      for (int i = 0; i < n_; ++i)
        for (int j = i; j < n_; ++j, ++k)
          hs_.h[k] = v_ * o.hs_.h[k] + o.v_ * hs_.h[k] + g_[i] * o.g_[j] + g_[j] * o.g_[i];
    }
    for (int i = 0; i < n_; ++i) g_[i] = v_ * o.g_[i] + o.v_ * g_[i];
    v_ *= o.v_;
    return *this;
  }

  Jet& operator/=(const Jet& o) {
    if (o.v_ == 0.0) throw DomainError("division by zero");
    if (o.n_ == 0) {
      const double q = v_ / o.v_;
      scale(1.0 / o.v_);
      v_ = q;
      return *this;
    }
    const double q = v_ / o.v_;
    *this *= o.reciprocal();
    v_ = q;
    return *this;
  }

  Jet reciprocal() const {
    if (v_ == 0.0) throw DomainError("division by zero");
    const double r = 1.0 / v_;
    return chain(r, -r * r, 2.0 * r * r * r);
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, const Jet& b) { return a *= b; }
  friend Jet operator/(Jet a, const Jet& b) { return a /= b; }

 private:
  int nh() const { return n_ * (n_ + 1) / 2; }
  Jet& scale(double s) {
    v_ *= s;
    for (int i = 0; i < n_; ++i) g_[i] *= s;
    if constexpr (Order == 2) {
      for (int i = 0; i < nh(); ++i) hs_.h[i] *= s;
    }
    return *this;
  }

  double v_;
  int n_;
  std::array<double, kMaxDim> g_;
  [[no_unique_address]] detail::HessStore<Order> hs_;
};

using Jet1 = Jet<1>;
using Jet2 = Jet<2>;

template <class T>
inline constexpr bool is_jet_v = false;
template <int O>
inline constexpr bool is_jet_v<Jet<O>> = true;

inline double value_of(double x) { return x; }
template <int O>
double value_of(const Jet<O>& x) {
  return x.value();
}

// Elementary functions. The double overloads mirror the jet overloads so
// generic code can be written once.

namespace jetfn {

inline double sq(double x) { return x * x; }

inline void check_log(double x) {
  if (!(x > 0.0)) throw DomainError("log of non-positive value");
}
inline void check_sqrt(double x) {
  if (x < 0.0) throw DomainError("sqrt of negative value");
}
inline void check_artanh(double x) {
  if (!(std::abs(x) < 1.0)) throw DomainError("artanh argument outside (-1, 1)");
}

}  // namespace jetfn

inline double sin(double x) { return std::sin(x); }
inline double cos(double x) { return std::cos(x); }
inline double tan(double x) { return std::tan(x); }
inline double sinh(double x) { return std::sinh(x); }
inline double cosh(double x) { return std::cosh(x); }
inline double tanh(double x) { return std::tanh(x); }
inline double exp(double x) { return std::exp(x); }
inline double log(double x) {
  jetfn::check_log(x);
  return std::log(x);
}
inline double sqrt(double x) {
  jetfn::check_sqrt(x);
  return std::sqrt(x);
}
inline double atan(double x) { return std::atan(x); }
inline double artanh(double x) {
  jetfn::check_artanh(x);
  return std::atanh(x);
}

template <int O>
Jet<O> sin(const Jet<O>& x) {
  const double s = std::sin(x.value()), c = std::cos(x.value());
  return x.chain(s, c, -s);
}
template <int O>
Jet<O> cos(const Jet<O>& x) {
  const double s = std::sin(x.value()), c = std::cos(x.value());
  return x.chain(c, -s, -c);
}
template <int O>
Jet<O> tan(const Jet<O>& x) {
  const double t = std::tan(x.value());
  const double d = 1.0 + t * t;
  return x.chain(t, d, 2.0 * t * d);
}
template <int O>
Jet<O> sinh(const Jet<O>& x) {
  const double s = std::sinh(x.value()), c = std::cosh(x.value());
  return x.chain(s, c, s);
}
template <int O>
Jet<O> cosh(const Jet<O>& x) {
  const double s = std::sinh(x.value()), c = std::cosh(x.value());
  return x.chain(c, s, c);
}
template <int O>
Jet<O> tanh(const Jet<O>& x) {
  const double t = std::tanh(x.value());
  const double d = 1.0 - t * t;
  return x.chain(t, d, -2.0 * t * d);
}
template <int O>
Jet<O> exp(const Jet<O>& x) {
  const double e = std::exp(x.value());
  return x.chain(e, e, e);
}
template <int O>
Jet<O> log(const Jet<O>& x) {
  jetfn::check_log(x.value());
  const double r = 1.0 / x.value();
  return x.chain(std::log(x.value()), r, -r * r);
}
template <int O>
Jet<O> sqrt(const Jet<O>& x) {
  jetfn::check_sqrt(x.value());
  const double s = std::sqrt(x.value());
  if (x.size() > 0 && s == 0.0) throw DomainError("sqrt derivative undefined at 0");
  if (s == 0.0) return Jet<O>(0.0);
  return x.chain(s, 0.5 / s, -0.25 / (s * x.value()));
}
template <int O>
Jet<O> atan(const Jet<O>& x) {
  const double v = x.value();
  const double d = 1.0 / (1.0 + v * v);
  return x.chain(std::atan(v), d, -2.0 * v * d * d);
}
template <int O>
Jet<O> artanh(const Jet<O>& x) {
  const double v = x.value();
  jetfn::check_artanh(v);
  const double d = 1.0 / (1.0 - v * v);
  return x.chain(std::atanh(v), d, 2.0 * v * d * d);
}

/// x^k by binary powering; exact for jets.
template <class T>
T pow_int(const T& x, long k) {
  if (k < 0) {
    if (value_of(x) == 0.0) throw DomainError("negative power of zero");
    return T(1.0) / pow_int(x, -k);
  }
  T result(1.0);
  T base = x;
  bool first = true;
  while (k > 0) {
    if (k & 1) {
      if (first) {
        result = base;
        first = false;
      } else {
        result = result * base;
      }
    }
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

/// Real power with positive base.
template <class T>
T pow_real(const T& x, const T& y) {
  if (!(value_of(x) > 0.0)) throw DomainError("non-integer power of non-positive base");
  using conehol::exp;
  using conehol::log;
  return exp(y * log(x));
}

}  // namespace conehol
