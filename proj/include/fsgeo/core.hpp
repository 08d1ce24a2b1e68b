#pragma once

// Small dense containers and scalar-generic linear algebra. All tensors here
// are square with one runtime extent n (n <= 8 in practice), stored flat in
// row-major order. The LU routines are templated on the scalar so they work
// for both double and jet-valued matrices.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace fsgeo {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : Error {
  using Error::Error;
};
struct PoleProximityError : Error {
  using Error::Error;
};
struct ZeroVectorError : Error {
  using Error::Error;
};
struct SingularMetricError : Error {
  using Error::Error;
};
struct NoConvergenceError : Error {
  using Error::Error;
};
struct NumericalInconsistencyError : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};

using Vec = std::vector<double>;

class Mat {
 public:
  Mat() = default;
  explicit Mat(int n, double v = 0.0) : n_(n), d_(static_cast<size_t>(n) * n, v) {}
  int n() const { return n_; }
  double& operator()(int i, int j) { return d_[static_cast<size_t>(i) * n_ + j]; }
  double operator()(int i, int j) const { return d_[static_cast<size_t>(i) * n_ + j]; }
  std::vector<double>& raw() { return d_; }
  const std::vector<double>& raw() const { return d_; }

 private:
  int n_ = 0;
  std::vector<double> d_;
};

class Ten3 {
 public:
  Ten3() = default;
  explicit Ten3(int n, double v = 0.0) : n_(n), d_(static_cast<size_t>(n) * n * n, v) {}
  int n() const { return n_; }
  double& operator()(int i, int j, int k) { return d_[(static_cast<size_t>(i) * n_ + j) * n_ + k]; }
  double operator()(int i, int j, int k) const { return d_[(static_cast<size_t>(i) * n_ + j) * n_ + k]; }
  std::vector<double>& raw() { return d_; }
  const std::vector<double>& raw() const { return d_; }

 private:
  int n_ = 0;
  std::vector<double> d_;
};

class Ten4 {
 public:
  Ten4() = default;
  explicit Ten4(int n, double v = 0.0) : n_(n), d_(static_cast<size_t>(n) * n * n * n, v) {}
  int n() const { return n_; }
  double& operator()(int i, int j, int k, int l) {
    return d_[((static_cast<size_t>(i) * n_ + j) * n_ + k) * n_ + l];
  }
  double operator()(int i, int j, int k, int l) const {
    return d_[((static_cast<size_t>(i) * n_ + j) * n_ + k) * n_ + l];
  }
  std::vector<double>& raw() { return d_; }
  const std::vector<double>& raw() const { return d_; }

 private:
  int n_ = 0;
  std::vector<double> d_;
};

class Ten5 {
 public:
  Ten5() = default;
  explicit Ten5(int n, double v = 0.0) : n_(n), d_(static_cast<size_t>(n) * n * n * n * n, v) {}
  int n() const { return n_; }
  double& operator()(int i, int j, int k, int l, int m) {
    return d_[(((static_cast<size_t>(i) * n_ + j) * n_ + k) * n_ + l) * n_ + m];
  }
  double operator()(int i, int j, int k, int l, int m) const {
    return d_[(((static_cast<size_t>(i) * n_ + j) * n_ + k) * n_ + l) * n_ + m];
  }
  std::vector<double>& raw() { return d_; }
  const std::vector<double>& raw() const { return d_; }

 private:
  int n_ = 0;
  std::vector<double> d_;
};

inline double max_abs(const Vec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

template <class TT>
double max_abs(const TT& t) {
  return max_abs(t.raw());
}

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Vec mat_vec(const Mat& m, const Vec& v) {
  Vec r(m.n(), 0.0);
  for (int i = 0; i < m.n(); ++i)
    for (int j = 0; j < m.n(); ++j) r[i] += m(i, j) * v[j];
  return r;
}

// a_ij x^i y^j
inline double quad(const Mat& m, const Vec& x, const Vec& y) {
  double s = 0.0;
  for (int i = 0; i < m.n(); ++i)
    for (int j = 0; j < m.n(); ++j) s += m(i, j) * x[i] * y[j];
  return s;
}

inline double scalar_value(double x) { return x; }

// LU with partial pivoting, in place; rows permuted via piv.
template <class T>
void lu_decompose(int n, std::vector<T>& a, std::vector<int>& piv) {
  piv.resize(n);
  for (int k = 0; k < n; ++k) {
    int p = k;
    double best = std::fabs(scalar_value(a[static_cast<size_t>(k) * n + k]));
    for (int i = k + 1; i < n; ++i) {
      const double v = std::fabs(scalar_value(a[static_cast<size_t>(i) * n + k]));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best < 1e-300) throw SingularMetricError("lu_decompose: singular matrix");
    piv[k] = p;
    if (p != k)
      for (int j = 0; j < n; ++j) std::swap(a[static_cast<size_t>(k) * n + j], a[static_cast<size_t>(p) * n + j]);
    for (int i = k + 1; i < n; ++i) {
      T f = a[static_cast<size_t>(i) * n + k] / a[static_cast<size_t>(k) * n + k];
      a[static_cast<size_t>(i) * n + k] = f;
      for (int j = k + 1; j < n; ++j) a[static_cast<size_t>(i) * n + j] -= f * a[static_cast<size_t>(k) * n + j];
    }
  }
}

template <class T>
void lu_solve_inplace(int n, const std::vector<T>& lu, const std::vector<int>& piv, std::vector<T>& b) {
  for (int k = 0; k < n; ++k)
    if (piv[k] != k) std::swap(b[k], b[piv[k]]);
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i; ++j) b[i] -= lu[static_cast<size_t>(i) * n + j] * b[j];
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j) b[i] -= lu[static_cast<size_t>(i) * n + j] * b[j];
    b[i] = b[i] / lu[static_cast<size_t>(i) * n + i];
  }
}

template <class T>
std::vector<T> solve_linear(int n, std::vector<T> a, std::vector<T> b) {
  std::vector<int> piv;
  lu_decompose(n, a, piv);
  lu_solve_inplace(n, a, piv, b);
  return b;
}

// Inverse of a square scalar-generic matrix in flat row-major storage.
template <class T>
std::vector<T> invert_flat(int n, std::vector<T> a) {
  std::vector<int> piv;
  lu_decompose(n, a, piv);
  std::vector<T> inv(static_cast<size_t>(n) * n);
  std::vector<T> col(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) col[i] = (i == j) ? a[0] * 0.0 + 1.0 : a[0] * 0.0;
    lu_solve_inplace(n, a, piv, col);
    for (int i = 0; i < n; ++i) inv[static_cast<size_t>(i) * n + j] = col[i];
  }
  return inv;
}

inline Mat mat_inverse(const Mat& m) {
  Mat r(m.n());
  r.raw() = invert_flat(m.n(), m.raw());
  return r;
}

inline double mat_det(const Mat& m) {
  std::vector<double> a = m.raw();
  std::vector<int> piv;
  lu_decompose(m.n(), a, piv);
  double d = 1.0;
  for (int k = 0; k < m.n(); ++k) {
    d *= a[static_cast<size_t>(k) * m.n() + k];
    if (piv[k] != k) d = -d;
  }
  return d;
}

// Cyclic Jacobi; returns eigenvalues sorted ascending. Good enough for
// definiteness checks on n <= 8 symmetric matrices.
inline Vec sym_eigenvalues(Mat a) {
  const int n = a.n();
  for (int sweep = 0; sweep < 128; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (off < 1e-28) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (std::fabs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
  }
  Vec ev(n);
  for (int i = 0; i < n; ++i) ev[i] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

namespace detail {
inline void fd_combine(double& out, double fp, double fm, double fp2, double fm2, double h) {
  const double d1 = (fp - fm) / (2.0 * h);
  const double d2 = (fp2 - fm2) / h;
  out = (4.0 * d2 - d1) / 3.0;
}
}  // namespace detail

// Fourth-order partial derivative in x[dir]: central differences with one
// Richardson level. eval must be a pure function of x returning double or a
// tensor type exposing raw().
template <class F>
auto fd_dx(F&& eval, const Vec& x, int dir, double step) {
  using TT = std::invoke_result_t<F, const Vec&>;
  const double h = step * (1.0 + std::fabs(x[dir]));
  Vec xs = x;
  xs[dir] = x[dir] + h;
  TT fp = eval(xs);
  xs[dir] = x[dir] - h;
  TT fm = eval(xs);
  xs[dir] = x[dir] + h / 2.0;
  TT fp2 = eval(xs);
  xs[dir] = x[dir] - h / 2.0;
  TT fm2 = eval(xs);
  if constexpr (std::is_same_v<TT, double>) {
    double out;
    detail::fd_combine(out, fp, fm, fp2, fm2, h);
    return out;
  } else if constexpr (std::is_same_v<TT, Vec>) {
    TT out = fp;
    for (size_t i = 0; i < out.size(); ++i) detail::fd_combine(out[i], fp[i], fm[i], fp2[i], fm2[i], h);
    return out;
  } else {
    TT out = fp;
    for (size_t i = 0; i < out.raw().size(); ++i)
      detail::fd_combine(out.raw()[i], fp.raw()[i], fm.raw()[i], fp2.raw()[i], fm2.raw()[i], h);
    return out;
  }
}

inline constexpr double kFdStep = 1e-5;        // x-differencing step scale
inline constexpr double kPoleEpsilon = 1e-6;   // admissibility floor for qt / |y|_a

}  // namespace fsgeo
