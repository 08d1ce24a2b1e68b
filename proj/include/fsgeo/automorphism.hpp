#pragma once

// The conformal automorphism: forward map t(x, y) sending the Finsleroid
// indicatrix to the background unit sphere, its fiber Jacobian, a damped
// Newton inverse, the deformation tensor, and the frame-expansion form.
//
// The map is homogeneous of degree h in y; its Jacobian satisfies the
// conformality relation (1/h^2) a_mn t^m_k t^n_h = K^{2(h-1)} g_kh, which the
// suites certify sample-by-sample.

#include <vector>

#include "fsgeo/background.hpp"
#include "fsgeo/core.hpp"
#include "fsgeo/finsleroid.hpp"
#include "fsgeo/jet.hpp"

namespace fsgeo {

template <class T>
std::vector<T> t_map(const PointFrame& pf, const std::vector<T>& y, const ScalarPack<T>& P) {
  using std::pow;
  using std::sqrt;
  const int n = pf.a.n();
  T bt = P.b * (1.0 / pf.c);
  T R = pow(P.K, pf.h) / sqrt(P.B);
  std::vector<T> t;
  t.reserve(n);
  for (int m = 0; m < n; ++m) {
    T v = (y[m] - bt * pf.bt_up[m]) * pf.h + P.A * pf.bt_up[m];
    t.push_back(v * R);
  }
  return t;
}

template <class T>
std::vector<T> t_map(const PointFrame& pf, const std::vector<T>& y) {
  return t_map(pf, y, scalar_pack(pf, y));
}

// d t^m / d x^n at fixed y; entry [n][m]. T-valued so it can be jet-expanded
// in y (needed for covariant derivatives of the Jacobian).
template <class T>
std::vector<std::vector<T>> t_map_dx(const PointFrame& pf, const std::vector<T>& y,
                                     const ScalarPack<T>& P, const ScalarPackDx<T>& D) {
  using std::pow;
  using std::sqrt;
  const int n = pf.a.n();
  // d_n bt^m with bt^m = a^{mk} b_k / c
  Mat dbtup(n);
  for (int nx = 0; nx < n; ++nx)
    for (int m = 0; m < n; ++m) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) {
        double dainv = 0.0;
        for (int p = 0; p < n; ++p)
          for (int q = 0; q < n; ++q) dainv -= pf.ainv(m, p) * pf.da(nx, p, q) * pf.ainv(q, k);
        s += dainv * pf.b_low[k] + pf.ainv(m, k) * pf.db(nx, k);
      }
      dbtup(nx, m) = s / pf.c;
    }
  T bt = P.b * (1.0 / pf.c);
  T sqrtB = sqrt(P.B);
  T R = pow(P.K, pf.h) / sqrtB;
  std::vector<std::vector<T>> out(n);
  for (int nx = 0; nx < n; ++nx) {
    T dbt = D.b[nx] * (1.0 / pf.c);
    T dR = pow(P.K, pf.h - 1.0) * D.K[nx] * pf.h / sqrtB - pow(P.K, pf.h) * D.B[nx] / (2.0 * P.B * sqrtB);
    out[nx].reserve(n);
    for (int m = 0; m < n; ++m) {
      T V = (y[m] - bt * pf.bt_up[m]) * pf.h + P.A * pf.bt_up[m];
      T dV = (dbt * pf.bt_up[m] + bt * dbtup(nx, m)) * (-pf.h) + D.A[nx] * pf.bt_up[m] + P.A * dbtup(nx, m);
      out[nx].push_back(dV * R + V * dR);
    }
  }
  return out;
}

struct AutomorphismEval {
  Vec t;
  Mat t_jac;  // (m,k) = d t^m / d y^k
  double S;   // background norm of t
  double p;   // conformal multiplier K^{1-h}/h
  Mat defo;   // p * t_jac
  double sin_rho, cos_rho;
  double T1, T2;  // frame-expansion coefficients, c = 1 only (else NaN)
};

inline AutomorphismEval automorphism_eval(const PointFrame& pf, const Vec& y) {
  const int n = pf.a.n();
  AutomorphismEval ev;
  const auto yj = lift(y, 1);
  const auto Pj = scalar_pack<Jet>(pf, yj);
  const auto tj = t_map(pf, yj, Pj);
  ev.t.resize(n);
  ev.t_jac = Mat(n);
  for (int m = 0; m < n; ++m) {
    ev.t[m] = tj[m].value();
    for (int k = 0; k < n; ++k) ev.t_jac(m, k) = tj[m].d1(k);
  }
  ev.S = std::sqrt(quad(pf.a, ev.t, ev.t));
  const double K = Pj.K.value();
  ev.p = std::pow(K, 1.0 - pf.h) / pf.h;
  ev.defo = ev.t_jac;
  for (double& v : ev.defo.raw()) v *= ev.p;
  const double B = Pj.B.value();
  ev.sin_rho = pf.h * Pj.qt.value() / std::sqrt(B);
  ev.cos_rho = Pj.A.value() / std::sqrt(B);
  if (pf.c == 1.0) {
    const double q = Pj.q.value(), b = Pj.b.value(), g = pf.g, h = pf.h;
    ev.T1 = -(1.0 - h) * q * q + B + 0.5 * g * q * (b + g * q);
    ev.T2 = ((1.0 - h) * b + 0.5 * g * q) * q;
  } else {
    ev.T1 = ev.T2 = std::nan("");
  }
  return ev;
}

// Frame expansion of the forward map over {l^m, m^m}; valid at c = 1.
inline Vec frame_reconstruct(const PointFrame& pf, const MetricData& md,
                             const AutomorphismEval& ev) {
  if (pf.c != 1.0) throw DomainError("frame_reconstruct requires c = 1");
  const int n = pf.a.n();
  const double K = md.s.K, B = md.s.B;
  const double scale = (K * K / B) * std::pow(K, pf.h - 1.0) / std::sqrt(B);
  Vec t(n);
  for (int m = 0; m < n; ++m) t[m] = (ev.T1 * md.l_upper[m] + ev.T2 * md.m_upper[m]) * scale;
  return t;
}

// Damped Newton for y(x, t). Homogeneity is used to normalise onto the unit
// sphere first, so the returned map is exactly degree 1/h in t.
inline Vec inverse_map(const PointFrame& pf, const Vec& t, int max_iter = 50) {
  const int n = pf.a.n();
  const double S = std::sqrt(quad(pf.a, t, t));
  if (!(S > 0.0)) throw ZeroVectorError("inverse_map: zero vector");
  Vec that(n);
  for (int i = 0; i < n; ++i) that[i] = t[i] / S;

  Vec yh = that;  // exact at g = 0
  double res = 0.0;
  auto residual = [&](const Vec& yy, Vec& out) {
    const auto tt = t_map(pf, yy, scalar_pack<double>(pf, yy));
    double r = 0.0;
    for (int i = 0; i < n; ++i) {
      out[i] = tt[i] - that[i];
      r = std::max(r, std::fabs(out[i]));
    }
    return r;
  };
  Vec F(n);
  res = residual(yh, F);
  int it = 0;
  for (; it < max_iter && res > 1e-14; ++it) {
    const auto yj = lift(yh, 1);
    const auto tj = t_map(pf, yj, scalar_pack<Jet>(pf, yj));
    std::vector<double> Jf(static_cast<size_t>(n) * n);
    for (int m = 0; m < n; ++m)
      for (int k = 0; k < n; ++k) Jf[static_cast<size_t>(m) * n + k] = tj[m].d1(k);
    Vec rhs(n);
    for (int i = 0; i < n; ++i) rhs[i] = -F[i];
    Vec step = solve_linear(n, Jf, rhs);
    double lam = 1.0;
    Vec trial(n), Ft(n);
    for (int halving = 0; halving < 30; ++halving) {
      for (int i = 0; i < n; ++i) trial[i] = yh[i] + lam * step[i];
      double rt;
      try {
        rt = residual(trial, Ft);
      } catch (const PoleProximityError&) {
        lam *= 0.5;
        continue;
      }
      if (rt < res || rt < 1e-14) {
        yh = trial;
        F = Ft;
        res = rt;
        break;
      }
      lam *= 0.5;
    }
  }
  if (res > 1e-10) throw NoConvergenceError("inverse_map: Newton did not converge");
  Vec yout(n);
  const double scale = std::pow(S, 1.0 / pf.h);
  for (int i = 0; i < n; ++i) yout[i] = yh[i] * scale;
  return yout;
}

// Jacobian of the inverse map at the converged point: the matrix inverse of
// the forward Jacobian, obtained by linear solves rather than differencing.
inline Mat inverse_jacobian(const Mat& t_jac) {
  Mat r(t_jac.n());
  r.raw() = invert_flat(t_jac.n(), t_jac.raw());
  return r;
}

// Second derivatives of the inverse: y^n_{ml} = - y^j_m y^n_k y^h_l t^k_{hj},
// assembled from second jets of the forward map. Index order (n, m, l).
inline Ten3 inverse_second(const PointFrame& pf, const Vec& y) {
  const int n = pf.a.n();
  const auto yj = lift(y, 2);
  const auto tj = t_map(pf, yj, scalar_pack<Jet>(pf, yj));
  Mat jac(n);
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k) jac(m, k) = tj[m].d1(k);
  const Mat inv = inverse_jacobian(jac);
  Ten3 out(n);
  for (int nn = 0; nn < n; ++nn)
    for (int m = 0; m < n; ++m)
      for (int l = 0; l < n; ++l) {
        double s = 0.0;
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            for (int h = 0; h < n; ++h) s += inv(j, m) * inv(nn, k) * inv(h, l) * tj[k].d2(h, j);
        out(nn, m, l) = -s;
      }
  return out;
}

}  // namespace fsgeo
