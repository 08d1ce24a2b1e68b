#pragma once

// Truncated Taylor arithmetic in the fiber variable: value plus dense first,
// second and third partials with respect to the N tangent-vector components.
// Every partial-in-y used by the library is obtained this way; no fiber
// derivative is ever finite-differenced.
//
// Storage is dense and unpacked (N <= 8), d2/d3 are kept totally symmetric by
// construction; symmetry_error() measures residual asymmetry for tests.

#include <cmath>
#include <vector>

#include "fsgeo/core.hpp"

namespace fsgeo {

class Jet {
 public:
  Jet() = default;

  Jet(int dim, int order, double value = 0.0) : n_(dim), ord_(order), f_(value) {
    if (order < 1 || order > 3) throw DomainError("Jet: order must be in {1,2,3}");
    g_.assign(static_cast<size_t>(n_), 0.0);
    if (ord_ >= 2) h_.assign(static_cast<size_t>(n_) * n_, 0.0);
    if (ord_ >= 3) t_.assign(static_cast<size_t>(n_) * n_ * n_, 0.0);
  }

  static Jet constant(int dim, int order, double v) { return Jet(dim, order, v); }

  static Jet variable(int dim, int order, double v, int seed) {
    Jet j(dim, order, v);
    j.g_[seed] = 1.0;
    return j;
  }

  int dim() const { return n_; }
  int order() const { return ord_; }
  double value() const { return f_; }
  double& value() { return f_; }

  double d1(int i) const { return g_[i]; }
  double& d1(int i) { return g_[i]; }
  double d2(int i, int j) const { return h_[static_cast<size_t>(i) * n_ + j]; }
  double& d2(int i, int j) { return h_[static_cast<size_t>(i) * n_ + j]; }
  double d3(int i, int j, int k) const { return t_[(static_cast<size_t>(i) * n_ + j) * n_ + k]; }
  double& d3(int i, int j, int k) { return t_[(static_cast<size_t>(i) * n_ + j) * n_ + k]; }

  double symmetry_error() const {
    double worst = 0.0, scale = 1.0;
    if (ord_ >= 2)
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
          worst = std::max(worst, std::fabs(d2(i, j) - d2(j, i)));
          scale = std::max(scale, std::fabs(d2(i, j)));
        }
    if (ord_ >= 3)
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
          for (int k = 0; k < n_; ++k) {
            const double v = d3(i, j, k);
            worst = std::max({worst, std::fabs(v - d3(i, k, j)), std::fabs(v - d3(j, i, k)),
                              std::fabs(v - d3(k, j, i))});
            scale = std::max(scale, std::fabs(v));
          }
    return worst / scale;
  }

  Jet& operator+=(const Jet& o) {
    check_shape(o);
    f_ += o.f_;
    for (size_t i = 0; i < g_.size(); ++i) g_[i] += o.g_[i];
    for (size_t i = 0; i < h_.size(); ++i) h_[i] += o.h_[i];
    for (size_t i = 0; i < t_.size(); ++i) t_[i] += o.t_[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    check_shape(o);
    f_ -= o.f_;
    for (size_t i = 0; i < g_.size(); ++i) g_[i] -= o.g_[i];
    for (size_t i = 0; i < h_.size(); ++i) h_[i] -= o.h_[i];
    for (size_t i = 0; i < t_.size(); ++i) t_[i] -= o.t_[i];
    return *this;
  }
  Jet& operator+=(double s) {
    f_ += s;
    return *this;
  }
  Jet& operator-=(double s) {
    f_ -= s;
    return *this;
  }
  Jet& operator*=(double s) {
    f_ *= s;
    for (auto& v : g_) v *= s;
    for (auto& v : h_) v *= s;
    for (auto& v : t_) v *= s;
    return *this;
  }
  Jet& operator/=(double s) { return (*this) *= 1.0 / s; }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a -= s; }
  friend Jet operator-(double s, const Jet& a) {
    Jet r = -a;
    r.f_ += s;
    return r;
  }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a /= s; }
  friend Jet operator-(const Jet& a) {
    Jet r = a;
    r *= -1.0;
    return r;
  }
  friend Jet operator+(const Jet& a) { return a; }

  // Leibniz product to the populated order.
  friend Jet operator*(const Jet& a, const Jet& b) {
    a.check_shape(b);
    const int n = a.n_;
    Jet r(n, a.ord_, a.f_ * b.f_);
    for (int i = 0; i < n; ++i) r.d1(i) = a.g_[i] * b.f_ + a.f_ * b.g_[i];
    if (a.ord_ >= 2)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          r.d2(i, j) = a.d2(i, j) * b.f_ + a.g_[i] * b.g_[j] + a.g_[j] * b.g_[i] + a.f_ * b.d2(i, j);
    if (a.ord_ >= 3)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            r.d3(i, j, k) = a.d3(i, j, k) * b.f_ + a.d2(i, j) * b.g_[k] + a.d2(i, k) * b.g_[j] +
                            a.d2(j, k) * b.g_[i] + a.g_[i] * b.d2(j, k) + a.g_[j] * b.d2(i, k) +
                            a.g_[k] * b.d2(i, j) + a.f_ * b.d3(i, j, k);
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) {
    if (std::fabs(b.f_) < 1e-14) throw DomainError("Jet: division by ~0");
    return a * compose(b, 1.0 / b.f_, -1.0 / (b.f_ * b.f_), 2.0 / (b.f_ * b.f_ * b.f_),
                       -6.0 / (b.f_ * b.f_ * b.f_ * b.f_));
  }
  friend Jet operator/(double s, const Jet& b) {
    if (std::fabs(b.f_) < 1e-14) throw DomainError("Jet: division by ~0");
    return s * compose(b, 1.0 / b.f_, -1.0 / (b.f_ * b.f_), 2.0 / (b.f_ * b.f_ * b.f_),
                       -6.0 / (b.f_ * b.f_ * b.f_ * b.f_));
  }

  // f o u by Faa di Bruno given f and its first three derivatives at u.value.
  static Jet compose(const Jet& u, double f0, double f1, double f2, double f3) {
    const int n = u.n_;
    Jet r(n, u.ord_, f0);
    for (int i = 0; i < n; ++i) r.d1(i) = f1 * u.g_[i];
    if (u.ord_ >= 2)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r.d2(i, j) = f2 * u.g_[i] * u.g_[j] + f1 * u.d2(i, j);
    if (u.ord_ >= 3)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            r.d3(i, j, k) = f3 * u.g_[i] * u.g_[j] * u.g_[k] +
                            f2 * (u.d2(i, j) * u.g_[k] + u.d2(i, k) * u.g_[j] + u.d2(j, k) * u.g_[i]) +
                            f1 * u.d3(i, j, k);
    return r;
  }

  friend Jet sqrt(const Jet& u) {
    if (u.f_ <= 0.0) throw DomainError("Jet: sqrt of non-positive value");
    const double s = std::sqrt(u.f_);
    return compose(u, s, 0.5 / s, -0.25 / (s * u.f_), 0.375 / (s * u.f_ * u.f_));
  }

  friend Jet exp(const Jet& u) {
    const double e = std::exp(u.f_);
    return compose(u, e, e, e, e);
  }

  friend Jet log(const Jet& u) {
    if (u.f_ <= 0.0) throw DomainError("Jet: log of non-positive value");
    const double x = u.f_;
    return compose(u, std::log(x), 1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x));
  }

  friend Jet pow(const Jet& u, double p) {
    if (u.f_ <= 0.0) throw DomainError("Jet: pow base must be positive");
    const double x = u.f_;
    const double f0 = std::pow(x, p);
    return compose(u, f0, p * f0 / x, p * (p - 1.0) * f0 / (x * x), p * (p - 1.0) * (p - 2.0) * f0 / (x * x * x));
  }

  friend Jet atan(const Jet& u) {
    const double x = u.f_;
    const double w = 1.0 + x * x;
    return compose(u, std::atan(x), 1.0 / w, -2.0 * x / (w * w), (6.0 * x * x - 2.0) / (w * w * w));
  }

  friend Jet acos(const Jet& u) {
    const double x = u.f_;
    if (std::fabs(x) >= 1.0) throw DomainError("Jet: acos argument outside (-1,1)");
    const double w = 1.0 - x * x;
    const double r = std::sqrt(w);
    return compose(u, std::acos(x), -1.0 / r, -x / (w * r), -(1.0 + 2.0 * x * x) / (w * w * r));
  }

 private:
  void check_shape(const Jet& o) const {
    if (n_ != o.n_ || ord_ != o.ord_) throw DomainError("Jet: operand shape mismatch");
  }

  int n_ = 0, ord_ = 0;
  double f_ = 0.0;
  std::vector<double> g_, h_, t_;
};

inline double scalar_value(const Jet& j) { return j.value(); }

// d j / d y^h as a jet one order lower.
inline Jet jet_derivative(const Jet& j, int h) {
  if (j.order() < 2) throw DomainError("jet_derivative: order too low");
  Jet r(j.dim(), j.order() - 1, j.d1(h));
  for (int i = 0; i < j.dim(); ++i) {
    r.d1(i) = j.d2(h, i);
    if (r.order() >= 2)
      for (int k = 0; k < j.dim(); ++k) r.d2(i, k) = j.d3(h, i, k);
  }
  return r;
}

inline Jet jet_truncate(const Jet& j, int order) {
  if (order > j.order()) throw DomainError("jet_truncate: cannot raise order");
  if (order == j.order()) return j;
  Jet r(j.dim(), order, j.value());
  for (int i = 0; i < j.dim(); ++i) {
    r.d1(i) = j.d1(i);
    if (order >= 2)
      for (int k = 0; k < j.dim(); ++k) r.d2(i, k) = j.d2(i, k);
  }
  return r;
}

inline double make_const(double, double v) { return v; }
inline Jet make_const(const Jet& like, double v) { return Jet::constant(like.dim(), like.order(), v); }

// Coordinate functions y^k as jets; every component seeded (identity d1).
inline std::vector<Jet> lift(const Vec& y, int order) {
  const int n = static_cast<int>(y.size());
  std::vector<Jet> out;
  out.reserve(y.size());
  for (int k = 0; k < n; ++k) out.push_back(Jet::variable(n, order, y[k], k));
  return out;
}

// Single-direction seeding: only component seed_index varies.
inline std::vector<Jet> lift(const Vec& y, int seed_index, int order) {
  const int n = static_cast<int>(y.size());
  if (seed_index < 0 || seed_index >= n) throw DomainError("lift: seed index out of range");
  std::vector<Jet> out;
  out.reserve(y.size());
  for (int k = 0; k < n; ++k)
    out.push_back(k == seed_index ? Jet::variable(n, order, y[k], k) : Jet::constant(n, order, y[k]));
  return out;
}

// Contractions used all over the scalar-generic code paths.
template <class T>
T tdot(const Vec& a, const std::vector<T>& y) {
  T s = y[0] * a[0];
  for (size_t i = 1; i < y.size(); ++i) s += y[i] * a[i];
  return s;
}

template <class T>
T tquad(const Mat& m, const std::vector<T>& x, const std::vector<T>& y) {
  T s = x[0] * (y[0] * m(0, 0));
  for (int i = 0; i < m.n(); ++i)
    for (int j = 0; j < m.n(); ++j) {
      if (i == 0 && j == 0) continue;
      s += x[i] * (y[j] * m(i, j));
    }
  return s;
}

}  // namespace fsgeo
