#pragma once

// Finsleroid metric function and all fiber objects derived from it. The
// scalar chain (b, q, qt, A, L, B, chi, J, K) is templated over the scalar
// type so that the same code yields plain values or jets; the covariant
// tangent vector, metric tensor, Cartan tensor and its fiber derivative all
// come from order-3 jets of the closed-form covector.
//
// Fiber singularities sit along +/- axis directions; evaluation throws
// PoleProximityError inside the guard band qt < 1e-6 |y|_a.

#include <vector>

#include "fsgeo/background.hpp"
#include "fsgeo/core.hpp"
#include "fsgeo/jet.hpp"

namespace fsgeo {

template <class T>
struct ScalarPack {
  T ayy;  // a_ij y^i y^j
  T b;    // b_i y^i
  T q;    // sqrt(ayy - b^2)
  T qt;   // sqrt(ayy - (b/c)^2)
  T A, L, B;
  T f;    // polar angle on the axis plane, in [0, pi]
  T chi;  // f / h
  T J, K;
};

namespace detail {

inline double branch_chi(double b, double L, double g, double h) {
  const double G = g / h;
  if (b > 0.0) return (-std::atan(0.5 * G) + std::atan(L / (h * b))) / h;
  if (b < 0.0) return (M_PI - std::atan(0.5 * G) + std::atan(L / (h * b))) / h;
  return (0.5 * M_PI - std::atan(0.5 * G)) / h;
}

}  // namespace detail

template <class T>
ScalarPack<T> scalar_pack(const PointFrame& pf, const std::vector<T>& y) {
  using std::acos;
  using std::exp;
  using std::sqrt;
  ScalarPack<T> P;
  P.ayy = tquad(pf.a, y, y);
  P.b = tdot(pf.b_low, y);
  const double S2 = scalar_value(P.ayy);
  if (!(S2 > 0.0)) throw ZeroVectorError("scalar_pack: zero or invalid tangent vector");
  T qt2 = P.ayy - P.b * P.b * (1.0 / (pf.c * pf.c));
  if (scalar_value(qt2) < kPoleEpsilon * kPoleEpsilon * S2)
    throw PoleProximityError("scalar_pack: direction inside the axis pole guard");
  P.qt = sqrt(qt2);
  P.q = sqrt(P.ayy - P.b * P.b);
  const double g = pf.g, h = pf.h;
  P.A = P.b + 0.5 * g * P.qt;
  P.L = P.qt + 0.5 * g * P.b;
  P.B = P.b * P.b + g * (P.b * P.qt) + qt2;
  if constexpr (std::is_same_v<T, double>) {
    P.chi = detail::branch_chi(P.b, P.L, g, h);
    P.f = h * P.chi;
  } else {
    // Equivalent single-branch form, smooth on the slit bundle.
    P.f = acos(P.A / sqrt(P.B));
    P.chi = P.f * (1.0 / h);
  }
  P.J = exp(P.chi * (-0.5 * g));
  P.K = sqrt(P.B) * P.J;
  return P;
}

inline void check_admissible(const PointFrame& pf, const Vec& y) {
  (void)scalar_pack<double>(pf, y);
}

// Fiber gradient of K^2/2. The b b_i term carries the c<1 correction and
// vanishes identically at c = 1.
template <class T>
std::vector<T> covector(const PointFrame& pf, const std::vector<T>& y, const ScalarPack<T>& P) {
  const int n = pf.a.n();
  const double cc = 1.0 - 1.0 / (pf.c * pf.c);
  T J2 = P.J * P.J;
  std::vector<T> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    T ui = y[0] * pf.a(i, 0);
    for (int j = 1; j < n; ++j) ui += y[j] * pf.a(i, j);
    T v = ui + P.qt * (pf.g * pf.b_low[i]) + P.b * (cc * pf.b_low[i]);
    out.push_back(v * J2);
  }
  return out;
}

template <class T>
std::vector<T> covector(const PointFrame& pf, const std::vector<T>& y) {
  return covector(pf, y, scalar_pack(pf, y));
}

// x-partials of the scalar chain at fixed y, one entry per coordinate
// direction. T-valued so they can in turn be jet-expanded in y.
template <class T>
struct ScalarPackDx {
  std::vector<T> b, qt, A, B, K, J;
};

template <class T>
ScalarPackDx<T> scalar_pack_dx(const PointFrame& pf, const std::vector<T>& y, const ScalarPack<T>& P) {
  using std::sqrt;
  const int n = pf.a.n();
  const double g = pf.g;
  ScalarPackDx<T> D;
  D.b.reserve(n);
  D.qt.reserve(n);
  D.A.reserve(n);
  D.B.reserve(n);
  D.K.reserve(n);
  D.J.reserve(n);
  T sqrtB = sqrt(P.B);
  for (int k = 0; k < n; ++k) {
    T dbk = y[0] * pf.db(k, 0);
    for (int i = 1; i < n; ++i) dbk += y[i] * pf.db(k, i);
    T dayy = y[0] * (y[0] * pf.da(k, 0, 0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == 0 && j == 0) continue;
        dayy += y[i] * (y[j] * pf.da(k, i, j));
      }
    T dqt = (dayy * 0.5 - P.b * dbk * (1.0 / (pf.c * pf.c))) / P.qt;
    T dB = dbk * (2.0 * P.b + g * P.qt) + dqt * (g * P.b + 2.0 * P.qt);
    T dK = P.K * ((P.b + g * P.qt) * dbk + P.qt * dqt) / P.B;
    T dJ = dK / sqrtB - P.K * dB / (2.0 * P.B * sqrtB);
    D.b.push_back(dbk);
    D.qt.push_back(dqt);
    D.A.push_back(dbk + 0.5 * g * dqt);
    D.B.push_back(dB);
    D.K.push_back(dK);
    D.J.push_back(dJ);
  }
  return D;
}

// d y_i / d x^n at fixed y, for all i, one coordinate direction n.
template <class T>
std::vector<T> covector_dx(const PointFrame& pf, const std::vector<T>& y, const ScalarPack<T>& P,
                           const ScalarPackDx<T>& D, int nx) {
  const int n = pf.a.n();
  const double cc = 1.0 - 1.0 / (pf.c * pf.c);
  T J2 = P.J * P.J;
  T twoJdJ = P.J * D.J[nx] * 2.0;
  std::vector<T> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    T ui = y[0] * pf.a(i, 0);
    T dui = y[0] * pf.da(nx, i, 0);
    for (int j = 1; j < n; ++j) {
      ui += y[j] * pf.a(i, j);
      dui += y[j] * pf.da(nx, i, j);
    }
    T base = ui + P.qt * (pf.g * pf.b_low[i]) + P.b * (cc * pf.b_low[i]);
    T dbase = dui + D.qt[nx] * (pf.g * pf.b_low[i]) + P.qt * (pf.g * pf.db(nx, i)) +
              D.b[nx] * (cc * pf.b_low[i]) + P.b * (cc * pf.db(nx, i));
    out.push_back(dbase * J2 + base * twoJdJ);
  }
  return out;
}

// All scalar invariants at one (x, y), plus the intermediates u, v, e.
// w, wt, tau blow up at b = 0 (admissible directions orthogonal to the
// axis); they are reported as computed and never reused downstream.
struct FinsleroidEval {
  double b, q, qt, w, wt, A, L, B, f, chi, J, K, h, tau;
  Vec u, v, e;
};

inline FinsleroidEval finsleroid_eval(const PointFrame& pf, const Vec& y) {
  const auto P = scalar_pack<double>(pf, y);
  FinsleroidEval e;
  e.b = P.b;
  e.q = P.q;
  e.qt = P.qt;
  e.w = P.q / P.b;
  e.wt = P.qt / P.b;
  e.A = P.A;
  e.L = P.L;
  e.B = P.B;
  e.f = P.f;
  e.chi = P.chi;
  e.J = P.J;
  e.K = P.K;
  e.h = pf.h;
  e.tau = 1.0 + pf.g * e.wt + e.wt * e.wt;
  const int n = pf.a.n();
  e.u = mat_vec(pf.a, y);
  e.v.resize(n);
  e.e.resize(n);
  for (int i = 0; i < n; ++i) e.v[i] = e.u[i] - P.b * pf.b_low[i];
  for (int i = 0; i < n; ++i) e.e[i] = -pf.b_low[i] + P.b / (P.q * P.q) * e.v[i];
  return e;
}

struct MetricData {
  Vec y_lower;
  Mat g, ginv;
  Vec l_lower, l_upper;
  Ten3 C_low;     // C_ijk
  Ten3 C_mixed;   // C^k_{ij}, contravariant slot first
  Ten4 dC_low;    // d C_ijk / d y^l, derivative slot last
  Vec C_contr;    // C_i
  Vec m_upper, m_lower;
  Mat Hproj;      // contravariant frame projector
  Mat eta;        // axis-orthogonal projector of the background
  FinsleroidEval s;
};

inline MetricData metric_data(const PointFrame& pf, const Vec& y) {
  const int n = pf.a.n();
  MetricData md;
  md.s = finsleroid_eval(pf, y);
  const auto yj = lift(y, 3);
  const auto Pj = scalar_pack<Jet>(pf, yj);
  const auto cov = covector(pf, yj, Pj);
  md.y_lower.resize(n);
  md.g = Mat(n);
  md.C_low = Ten3(n);
  md.dC_low = Ten4(n);
  for (int i = 0; i < n; ++i) {
    md.y_lower[i] = cov[i].value();
    for (int j = 0; j < n; ++j) {
      md.g(i, j) = cov[i].d1(j);
      for (int k = 0; k < n; ++k) {
        md.C_low(i, j, k) = 0.5 * cov[i].d2(j, k);
        for (int l = 0; l < n; ++l) md.dC_low(i, j, k, l) = 0.5 * cov[i].d3(j, k, l);
      }
    }
  }
  md.ginv = mat_inverse(md.g);
  const double K = md.s.K;
  md.l_lower.resize(n);
  md.l_upper.resize(n);
  for (int i = 0; i < n; ++i) {
    md.l_lower[i] = md.y_lower[i] / K;
    md.l_upper[i] = y[i] / K;
  }
  md.C_mixed = Ten3(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int h = 0; h < n; ++h) s += md.ginv(k, h) * md.C_low(h, i, j);
        md.C_mixed(k, i, j) = s;
      }
  md.C_contr.assign(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int m = 0; m < n; ++m)
      for (int nn = 0; nn < n; ++nn) md.C_contr[i] += md.ginv(m, nn) * md.C_low(i, m, nn);
  // Frame vector along the Cartan direction, unit in g and transversal to l
  // at any axis norm; the B/c axis coefficient reduces to the familiar
  // qt^2 + (b + g qt) b combination at c = 1.
  md.m_upper.resize(n);
  for (int m = 0; m < n; ++m)
    md.m_upper[m] =
        (md.s.B * pf.bt_up[m] / pf.c - (md.s.b + pf.g * md.s.qt) * y[m]) / (md.s.qt * K);
  md.m_lower = mat_vec(md.g, md.m_upper);
  md.eta = Mat(n);
  const double bt = md.s.b / pf.c;
  for (int k = 0; k < n; ++k)
    for (int m = 0; m < n; ++m) {
      const double vtk = y[k] - bt * pf.bt_up[k];
      const double vtm = y[m] - bt * pf.bt_up[m];
      md.eta(k, m) = pf.ainv(k, m) - pf.bt_up[k] * pf.bt_up[m] - vtk * vtm / (md.s.qt * md.s.qt);
    }
  md.Hproj = Mat(n);
  for (int m = 0; m < n; ++m)
    for (int j = 0; j < n; ++j)
      md.Hproj(m, j) = md.ginv(m, j) - md.l_upper[m] * md.l_upper[j] - md.m_upper[m] * md.m_upper[j];
  return md;
}

struct HomogeneityResiduals {
  double K, y_lower, g, cartan, euler;
};

// Degrees: K and y_i are 1, g is 0, the Cartan tensor is -1.
inline HomogeneityResiduals homogeneity_check(const PointFrame& pf, const Vec& y, double k) {
  Vec ky = y;
  for (double& v : ky) v *= k;
  const MetricData a = metric_data(pf, y);
  const MetricData b = metric_data(pf, ky);
  HomogeneityResiduals r{};
  r.K = std::fabs(b.s.K - k * a.s.K) / (1.0 + std::fabs(k * a.s.K));
  double worst = 0.0;
  for (int i = 0; i < pf.a.n(); ++i)
    worst = std::max(worst, std::fabs(b.y_lower[i] - k * a.y_lower[i]));
  r.y_lower = worst / (1.0 + max_abs(a.y_lower));
  worst = 0.0;
  for (size_t i = 0; i < a.g.raw().size(); ++i) worst = std::max(worst, std::fabs(b.g.raw()[i] - a.g.raw()[i]));
  r.g = worst / (1.0 + max_abs(a.g));
  worst = 0.0;
  for (size_t i = 0; i < a.C_low.raw().size(); ++i)
    worst = std::max(worst, std::fabs(k * b.C_low.raw()[i] - a.C_low.raw()[i]));
  r.cartan = worst / (1.0 + max_abs(a.C_low));
  // Euler: y^k dK/dy^k = K
  const auto yj = lift(y, 1);
  const auto Pj = scalar_pack<Jet>(pf, yj);
  double euler = 0.0;
  for (int i = 0; i < pf.a.n(); ++i) euler += y[i] * Pj.K.d1(i);
  r.euler = std::fabs(euler - a.s.K) / (1.0 + std::fabs(a.s.K));
  return r;
}

}  // namespace fsgeo
