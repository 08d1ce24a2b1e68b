#include "fsgeo/curvature.hpp"

#include <cmath>
#include <random>

#include "fsgeo/automorphism.hpp"

namespace fsgeo {

namespace {

// a_{hlij} = a_{lr} a_h^r_{ij}
Ten4 riem_lower_second(const Mat& a, const Ten4& riem) {
  const int n = a.n();
  Ten4 out(n);
  for (int h = 0; h < n; ++h)
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = 0.0;
          for (int r = 0; r < n; ++r) s += a(l, r) * riem(h, r, i, j);
          out(h, l, i, j) = s;
        }
  return out;
}

Mat forward_jacobian(const PointFrame& pf, const Vec& y) {
  const int n = pf.a.n();
  const auto yj = lift(y, 1);
  const auto tj = t_map(pf, yj, scalar_pack<Jet>(pf, yj));
  Mat jac(n);
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k) jac(m, k) = tj[m].d1(k);
  return jac;
}

}  // namespace

Ten3 m_transitive(const PointFrame& pf, const Ten4& riem, const Vec& y) {
  const int n = pf.a.n();
  const Vec t = t_map(pf, y, scalar_pack<double>(pf, y));
  const Mat yinv = inverse_jacobian(forward_jacobian(pf, y));
  Ten3 M(n);
  for (int nn = 0; nn < n; ++nn)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int tt = 0; tt < n; ++tt)
          for (int h = 0; h < n; ++h) s += yinv(nn, tt) * t[h] * riem(h, tt, i, j);
        M(nn, i, j) = -s;
      }
  return M;
}

Ten3 m_definition(const BackgroundModel& model, const Vec& x, const Vec& y) {
  const int n = model.dim();
  const PointFrame pf = point_frame(model, x);
  const ConnectionData cd = connection_data(pf, y);
  std::vector<Mat> dN(n);
  for (int i = 0; i < n; ++i)
    dN[i] = fd_dx([&](const Vec& xx) { return n_coeffs_closed(point_frame(model, xx), y); }, x, i,
                  kFdStep);
  Ten3 M(n);
  for (int nn = 0; nn < n; ++nn)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = dN[i](nn, j) - dN[j](nn, i);
        for (int h = 0; h < n; ++h)
          s += -cd.N(h, i) * cd.D(nn, j, h) + cd.N(h, j) * cd.D(nn, i, h);
        M(nn, i, j) = s;
      }
  return M;
}

Ten3 m_finsleroid_closed(const PointFrame& pf, const Ten4& riem, const Vec& y) {
  if (pf.c != 1.0) throw DomainError("m_finsleroid_closed requires c = 1");
  const int n = pf.a.n();
  const auto P = scalar_pack<double>(pf, y);
  const Ten4 rlow = riem_lower_second(pf.a, riem);
  const Vec u = mat_vec(pf.a, y);
  const double g = pf.g, h = pf.h;
  const double c0 = ((1.0 - h) * P.b + 0.5 * g * P.q) / h;
  Ten3 Mlow(n);
  for (int nn = 0; nn < n; ++nn) {
    const double vn = u[nn] - P.b * pf.b_low[nn];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double bl_n = 0.0, bl_y = 0.0, ay = 0.0;
        for (int l = 0; l < n; ++l) bl_n += pf.b_low[l] * riem(nn, l, i, j);
        for (int tt = 0; tt < n; ++tt) {
          double bl = 0.0;
          for (int l = 0; l < n; ++l) bl += pf.b_low[l] * riem(tt, l, i, j);
          bl_y += y[tt] * bl;
          ay += y[tt] * rlow(tt, nn, i, j);
        }
        const double rhs = c0 * bl_n - (0.5 * g * vn / P.q + (1.0 - h) * pf.b_low[nn]) / h * bl_y - ay;
        Mlow(nn, i, j) = rhs * (P.K * P.K / P.B);
      }
  }
  return Mlow;
}

Ten4 e_jet(const PointFrame& pf, const Ten4& riem, const Vec& y) {
  const int n = pf.a.n();
  const auto yj = lift(y, 2);
  const auto tj2 = t_map(pf, yj, scalar_pack<Jet>(pf, yj));
  std::vector<Jet> jac;
  jac.reserve(static_cast<size_t>(n) * n);
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k) jac.push_back(jet_derivative(tj2[m], k));
  const auto yinv = invert_flat(n, jac);
  std::vector<Jet> t1;
  t1.reserve(n);
  for (int m = 0; m < n; ++m) t1.push_back(jet_truncate(tj2[m], 1));
  Ten4 E(n);
  for (int nn = 0; nn < n; ++nn)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Jet s = make_const(t1[0], 0.0);
        for (int tt = 0; tt < n; ++tt)
          for (int h = 0; h < n; ++h) {
            const double r = riem(h, tt, i, j);
            if (r != 0.0) s += yinv[static_cast<size_t>(nn) * n + tt] * t1[h] * r;
          }
        // M = -s, so E_k = -dM/dy^k = ds/dy^k
        for (int k = 0; k < n; ++k) E(k, nn, i, j) = s.d1(k);
      }
  return E;
}

Ten4 e_definition(const BackgroundModel& model, const Vec& x, const Vec& y) {
  const int n = model.dim();
  const PointFrame pf = point_frame(model, x);
  const ConnectionData cd = connection_data(pf, y);
  std::vector<Ten3> dD(n);
  for (int i = 0; i < n; ++i)
    dD[i] = fd_dx([&](const Vec& xx) { return connection_data(point_frame(model, xx), y).D; }, x, i,
                  kFdStep);
  Ten4 E(n);
  for (int k = 0; k < n; ++k)
    for (int nn = 0; nn < n; ++nn)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double di = dD[i](nn, j, k), dj = dD[j](nn, i, k);
          for (int h = 0; h < n; ++h) {
            di += -cd.N(h, i) * cd.N3(nn, j, k, h);
            dj += -cd.N(h, j) * cd.N3(nn, i, k, h);
          }
          double s = di - dj;
          for (int m = 0; m < n; ++m)
            s += cd.D(m, j, k) * cd.D(nn, i, m) - cd.D(m, i, k) * cd.D(nn, j, m);
          E(k, nn, i, j) = s;
        }
  return E;
}

Ten4 e_transitive(const PointFrame& pf, const Ten4& riem, const Vec& y) {
  const int n = pf.a.n();
  const auto yj = lift(y, 2);
  const auto tj2 = t_map(pf, yj, scalar_pack<Jet>(pf, yj));
  Mat jac(n);
  Ten3 t2(n);  // t^h_{km}
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k) {
      jac(m, k) = tj2[m].d1(k);
      for (int l = 0; l < n; ++l) t2(m, k, l) = tj2[m].d2(k, l);
    }
  const Mat yinv = inverse_jacobian(jac);
  const Ten3 M = m_transitive(pf, riem, y);
  Ten4 E(n);
  for (int k = 0; k < n; ++k)
    for (int nn = 0; nn < n; ++nn)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = 0.0;
          for (int h = 0; h < n; ++h)
            for (int m = 0; m < n; ++m) s += yinv(nn, h) * t2(h, k, m) * M(m, i, j);
          for (int m = 0; m < n; ++m)
            for (int h = 0; h < n; ++h) s += yinv(nn, m) * riem(h, m, i, j) * jac(h, k);
          E(k, nn, i, j) = s;
        }
  return E;
}

Ten4 rho_closed(const PointFrame& pf, const Ten4& riem, const Vec& y) {
  const int n = pf.a.n();
  const MetricData md = metric_data(pf, y);
  const Ten3 M = m_transitive(pf, riem, y);
  const Mat jac = forward_jacobian(pf, y);
  const Mat yinv = inverse_jacobian(jac);
  const double h = pf.h, K = md.s.K;
  Ten4 rho(n);
  for (int k = 0; k < n; ++k)
    for (int nn = 0; nn < n; ++nn)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = 0.0;
          for (int m = 0; m < n; ++m) {
            const double br = md.l_lower[k] * (m == nn ? 1.0 : 0.0) - md.l_upper[nn] * md.g(m, k);
            s += -(1.0 - h) / K * br * M(m, i, j);
          }
          for (int m = 0; m < n; ++m)
            for (int hh = 0; hh < n; ++hh) s += yinv(nn, m) * riem(hh, m, i, j) * jac(hh, k);
          rho(k, nn, i, j) = s;
        }
  return rho;
}

Ten4 t_tensor(const PointFrame& pf, const Vec& y) {
  const int n = pf.a.n();
  const auto P = scalar_pack<double>(pf, y);
  const auto cov = covector(pf, y, P);
  const Vec t = t_map(pf, y, P);
  const Mat jac = forward_jacobian(pf, y);
  const double deg = pf.h, K = P.K;
  const double p = std::pow(K, 1.0 - deg) / deg;
  Ten4 T(n);
  for (int k = 0; k < n; ++k)
    for (int nn = 0; nn < n; ++nn)
      for (int h = 0; h < n; ++h)
        for (int m = 0; m < n; ++m)
          T(k, nn, h, m) =
              p * p *
              (0.5 * (jac(h, k) * jac(m, nn) - jac(m, k) * jac(h, nn)) +
               (1.0 - deg) / (K * K) * (cov[k] * t[h] * jac(m, nn) - cov[nn] * t[h] * jac(m, k)));
  return T;
}

Ten4 rho_from_t(const PointFrame& pf, const Ten4& riem, const Vec& y) {
  const int n = pf.a.n();
  const Ten4 T = t_tensor(pf, y);
  const Ten4 rlow = riem_lower_second(pf.a, riem);
  const MetricData md = metric_data(pf, y);
  Ten4 low(n);
  for (int k = 0; k < n; ++k)
    for (int nn = 0; nn < n; ++nn)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = 0.0;
          for (int h = 0; h < n; ++h)
            for (int m = 0; m < n; ++m) s += T(k, nn, h, m) * rlow(h, m, i, j);
          low(k, nn, i, j) = s;
        }
  Ten4 rho(n);
  for (int k = 0; k < n; ++k)
    for (int nn = 0; nn < n; ++nn)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = 0.0;
          for (int q = 0; q < n; ++q) s += md.ginv(nn, q) * low(k, q, i, j);
          rho(k, nn, i, j) = s;
        }
  return rho;
}

CurvatureData curvature_data(const BackgroundModel& model, const Vec& x, const Vec& y) {
  const PointFrame pf = point_frame(model, x);
  const Ten4 riem = riemann(model, x);
  const MetricData md = metric_data(pf, y);
  const int n = pf.a.n();
  CurvatureData cdta;
  cdta.M = m_transitive(pf, riem, y);
  cdta.E = e_transitive(pf, riem, y);
  cdta.rho = rho_closed(pf, riem, y);
  cdta.T = t_tensor(pf, y);
  cdta.M_low = Ten3(n);
  cdta.rho_low = Ten4(n);
  for (int nn = 0; nn < n; ++nn)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int m = 0; m < n; ++m) s += md.g(nn, m) * cdta.M(m, i, j);
        cdta.M_low(nn, i, j) = s;
      }
  for (int k = 0; k < n; ++k)
    for (int nn = 0; nn < n; ++nn)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = 0.0;
          for (int m = 0; m < n; ++m) s += md.g(nn, m) * cdta.rho(k, m, i, j);
          cdta.rho_low(k, nn, i, j) = s;
        }
  return cdta;
}

namespace {

// Reproducible smooth test field: trig in x, quadratic in the fiber slot.
struct TestField {
  Mat P, Q, R;
  Vec d, om;
};

TestField make_test_field(int n) {
  std::mt19937_64 eng(0x5eedf1e1dULL);
  auto uni = [&]() { return 2.0 * (static_cast<double>(eng() >> 11) * 0x1.0p-53) - 1.0; };
  TestField f;
  f.P = Mat(n);
  f.Q = Mat(n);
  f.R = Mat(n);
  f.d.resize(n);
  f.om.resize(n);
  for (int i = 0; i < n; ++i) {
    f.d[i] = uni();
    f.om[i] = uni();
    for (int j = 0; j < n; ++j) {
      f.P(i, j) = uni();
      f.Q(i, j) = uni();
      f.R(i, j) = uni();
    }
  }
  return f;
}

template <class T>
std::vector<T> field_eval(const TestField& f, const Vec& x, const std::vector<T>& v) {
  const int n = static_cast<int>(v.size());
  const double s = std::sin(dot(f.om, x));
  T dv = tdot(f.d, v);
  T dv2 = dv * dv;
  std::vector<T> out;
  out.reserve(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.push_back(dv2 * f.R(i, j) + (f.P(i, j) + f.Q(i, j) * s));
  return out;
}

template <class T>
std::vector<T> field_dx(const TestField& f, const Vec& x, const std::vector<T>& v, int dir) {
  const int n = static_cast<int>(v.size());
  const double c = std::cos(dot(f.om, x)) * f.om[dir];
  T zero = tdot(f.d, v) * 0.0;
  std::vector<T> out;
  out.reserve(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.push_back(zero + f.Q(i, j) * c);
  return out;
}

template <class T>
std::vector<T> field_dv(const TestField& f, const std::vector<T>& v, int u) {
  const int n = static_cast<int>(v.size());
  T dv = tdot(f.d, v);
  std::vector<T> out;
  out.reserve(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.push_back(dv * (2.0 * f.d[u] * f.R(i, j)));
  return out;
}

}  // namespace

CurvatureResiduals curvature_residuals(const BackgroundModel& model, const Vec& x, const Vec& y) {
  const int n = model.dim();
  const PointFrame pf = point_frame(model, x);
  const Ten4 riem = riemann(model, x);
  const Ten4 rlow = riem_lower_second(pf.a, riem);
  const MetricData md = metric_data(pf, y);
  const ConnectionData cd = connection_data(pf, y);
  const auto P = scalar_pack<double>(pf, y);
  CurvatureResiduals R;

  const Ten3 M = m_transitive(pf, riem, y);
  const Ten3 Mdef = m_definition(model, x, y);
  const Ten4 Ejet = e_jet(pf, riem, y);
  const Ten4 Edef = e_definition(model, x, y);
  const Ten4 Etrans = e_transitive(pf, riem, y);
  const Ten4 rhoC = rho_closed(pf, riem, y);
  const Ten4 rhoT = rho_from_t(pf, riem, y);
  const Vec t = t_map(pf, y, P);
  const Mat jac = forward_jacobian(pf, y);
  const Mat yinv = inverse_jacobian(jac);

  const double sM = 1.0 + max_abs(M);
  const double sE = 1.0 + max_abs(Ejet);
  const double sRho = 1.0 + max_abs(rhoC);

  for (size_t i = 0; i < M.raw().size(); ++i)
    R.m_routes = std::max(R.m_routes, std::fabs(M.raw()[i] - Mdef.raw()[i]) / sM);

  Ten3 Mlow(n);
  for (int nn = 0; nn < n; ++nn)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0, c = 0.0;
        for (int m = 0; m < n; ++m) {
          s += md.g(nn, m) * M(m, i, j);
          c += md.y_lower[m] * M(m, i, j);
        }
        Mlow(nn, i, j) = s;
        R.m_contraction = std::max(R.m_contraction, std::fabs(c) / (sM * (1.0 + P.K)));
      }

  if (pf.c == 1.0) {
    const Ten3 Mfin = m_finsleroid_closed(pf, riem, y);
    for (size_t i = 0; i < Mlow.raw().size(); ++i)
      R.m_closed = std::max(R.m_closed, std::fabs(Mlow.raw()[i] - Mfin.raw()[i]) / sM);
    // squared contraction of the same closed family
    double direct = 0.0;
    for (int nn = 0; nn < n; ++nn)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double up = 0.0;
          for (int m = 0; m < n; ++m)
            for (int a = 0; a < n; ++a)
              for (int b2 = 0; b2 < n; ++b2)
                up += md.ginv(nn, m) * pf.ainv(i, a) * pf.ainv(j, b2) * Mlow(m, a, b2);
          direct += up * Mlow(nn, i, j);
        }
    const double g = pf.g, h = pf.h;
    const double c0 = ((1.0 - h) * P.b + 0.5 * g * P.q) / h;
    auto F2 = [&](int nn, int i, int j) {
      double v = 0.0;
      for (int l = 0; l < n; ++l) v += c0 * pf.b_low[l] * riem(nn, l, i, j);
      for (int tt = 0; tt < n; ++tt) v -= y[tt] * rlow(tt, nn, i, j);
      return v;
    };
    double closed = 0.0;
    for (int nn = 0; nn < n; ++nn)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double f2r = 0.0;
          for (int p2 = 0; p2 < n; ++p2)
            for (int a = 0; a < n; ++a)
              for (int b2 = 0; b2 < n; ++b2)
                f2r += pf.ainv(nn, p2) * pf.ainv(i, a) * pf.ainv(j, b2) * F2(p2, a, b2);
          closed += f2r * F2(nn, i, j);
        }
    const double bk2 = P.B / (P.K * P.K);
    R.m_sq_closed = std::fabs(bk2 * direct - closed) / (1.0 + std::fabs(closed));
  }

  for (size_t i = 0; i < Ejet.raw().size(); ++i) {
    R.e_routes_def = std::max(R.e_routes_def, std::fabs(Ejet.raw()[i] - Edef.raw()[i]) / sE);
    R.e_routes_trans = std::max(R.e_routes_trans, std::fabs(Ejet.raw()[i] - Etrans.raw()[i]) / sE);
  }

  for (int nn = 0; nn < n; ++nn)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double yk = 0.0;
        for (int k = 0; k < n; ++k) yk += y[k] * Etrans(k, nn, i, j);
        R.e_contr_yk = std::max(R.e_contr_yk, std::fabs(yk + M(nn, i, j)) / sE);
      }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double yn = 0.0;
        for (int nn = 0; nn < n; ++nn) yn += md.y_lower[nn] * Etrans(k, nn, i, j);
        R.e_contr_yn = std::max(R.e_contr_yn, std::fabs(yn - Mlow(k, i, j)) / (sE * (1.0 + P.K)));
      }
  for (int m = 0; m < n; ++m)
    for (int nn = 0; nn < n; ++nn)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double emn = 0.0, enm = 0.0, cm = 0.0;
          for (int h = 0; h < n; ++h) {
            emn += md.g(nn, h) * Etrans(m, h, i, j);
            enm += md.g(m, h) * Etrans(nn, h, i, j);
            cm += md.C_low(m, nn, h) * M(h, i, j);
          }
          R.e_sym = std::max(R.e_sym, std::fabs(emn + enm - 2.0 * cm) / sE);
        }

  for (int k = 0; k < n; ++k)
    for (int nn = 0; nn < n; ++nn)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double def = Edef(k, nn, i, j);
          for (int h = 0; h < n; ++h) def -= M(h, i, j) * md.C_mixed(nn, h, k);
          R.rho_routes_def = std::max(R.rho_routes_def, std::fabs(def - rhoC(k, nn, i, j)) / sRho);
          R.rho_routes_T = std::max(R.rho_routes_T, std::fabs(rhoT(k, nn, i, j) - rhoC(k, nn, i, j)) / sRho);
        }

  Ten4 rl(n);
  for (int k = 0; k < n; ++k)
    for (int nn = 0; nn < n; ++nn)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = 0.0;
          for (int m = 0; m < n; ++m) s += md.g(nn, m) * rhoC(k, m, i, j);
          rl(k, nn, i, j) = s;
        }
  for (int k = 0; k < n; ++k)
    for (int nn = 0; nn < n; ++nn)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          R.rho_skew = std::max({R.rho_skew, std::fabs(rl(k, nn, i, j) + rl(nn, k, i, j)) / sRho,
                                 std::fabs(rl(k, nn, i, j) + rl(k, nn, j, i)) / sRho});

  // squared-norm relation
  {
    double rho2 = 0.0;
    for (int k = 0; k < n; ++k)
      for (int nn = 0; nn < n; ++nn)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            double up = 0.0;
            for (int p2 = 0; p2 < n; ++p2)
              for (int q = 0; q < n; ++q)
                for (int a = 0; a < n; ++a)
                  for (int b2 = 0; b2 < n; ++b2)
                    up += md.ginv(k, p2) * md.ginv(nn, q) * pf.ainv(i, a) * pf.ainv(j, b2) *
                          rl(p2, q, a, b2);
            rho2 += up * rl(k, nn, i, j);
          }
    double a2 = 0.0;
    for (int k = 0; k < n; ++k)
      for (int nn = 0; nn < n; ++nn)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            double up = 0.0;
            for (int p2 = 0; p2 < n; ++p2)
              for (int q = 0; q < n; ++q)
                for (int a = 0; a < n; ++a)
                  for (int b2 = 0; b2 < n; ++b2)
                    up += pf.ainv(k, p2) * pf.ainv(nn, q) * pf.ainv(i, a) * pf.ainv(j, b2) *
                          rlow(p2, q, a, b2);
            a2 += up * rlow(k, nn, i, j);
          }
    const double S2 = quad(pf.a, t, t);
    double corr = 0.0;
    for (int nn = 0; nn < n; ++nn)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double f1 = 0.0, f2 = 0.0;
          for (int l = 0; l < n; ++l) {
            double up = 0.0;
            for (int q = 0; q < n; ++q)
              for (int a = 0; a < n; ++a)
                for (int b2 = 0; b2 < n; ++b2)
                  up += pf.ainv(nn, q) * pf.ainv(i, a) * pf.ainv(j, b2) * rlow(l, q, a, b2);
            f1 += t[l] * up;
            f2 += t[l] * rlow(l, nn, i, j);
          }
          corr += f1 * f2;
        }
    const double want = a2 + 2.0 / S2 * (1.0 / (pf.h * pf.h) - 1.0) * corr;
    R.rho_sq = std::fabs(rho2 - want) / (1.0 + std::fabs(want));
  }

  // totally contravariant representation
  {
    const double p = std::pow(P.K, 1.0 - pf.h) / pf.h;
    for (int k = 0; k < n; ++k)
      for (int nn = 0; nn < n; ++nn)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            double direct = 0.0;
            for (int p2 = 0; p2 < n; ++p2)
              for (int q = 0; q < n; ++q)
                for (int a = 0; a < n; ++a)
                  for (int b2 = 0; b2 < n; ++b2)
                    direct += md.ginv(k, p2) * md.ginv(nn, q) * pf.ainv(i, a) * pf.ainv(j, b2) *
                              rl(p2, q, a, b2);
            double mu_n = 0.0, mu_k = 0.0;
            for (int a = 0; a < n; ++a)
              for (int b2 = 0; b2 < n; ++b2) {
                double Mk = 0.0, Mn = 0.0;
                for (int q = 0; q < n; ++q) {
                  Mk += md.ginv(k, q) * Mlow(q, a, b2);
                  Mn += md.ginv(nn, q) * Mlow(q, a, b2);
                }
                mu_n += pf.ainv(i, a) * pf.ainv(j, b2) * Mn;
                mu_k += pf.ainv(i, a) * pf.ainv(j, b2) * Mk;
              }
            double form = -(1.0 - pf.h) / P.K * (md.l_upper[k] * mu_n - md.l_upper[nn] * mu_k);
            for (int h = 0; h < n; ++h)
              for (int r = 0; r < n; ++r) {
                double up = 0.0;
                for (int a = 0; a < n; ++a)
                  for (int b2 = 0; b2 < n; ++b2) {
                    double rr = 0.0;
                    for (int l = 0; l < n; ++l) rr += pf.ainv(h, l) * riem(l, r, a, b2);
                    up += pf.ainv(i, a) * pf.ainv(j, b2) * rr;
                  }
                form += yinv(k, h) * yinv(nn, r) * up / (p * p);
              }
            R.raise_consistency =
                std::max(R.raise_consistency, std::fabs(direct - form) / (1.0 + std::fabs(direct)));
          }
  }

  // cyclic identities through the transitive derivative forms
  {
    const Ten5 na = riemann_nabla(model, x);
    Ten4 DM(n);
    for (int l = 0; l < n; ++l)
      for (int nn = 0; nn < n; ++nn)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int tt = 0; tt < n; ++tt)
              for (int h = 0; h < n; ++h) s += yinv(nn, tt) * t[h] * na(l, h, tt, i, j);
            DM(l, nn, i, j) = -s;
          }
    for (int nn = 0; nn < n; ++nn)
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            const double cyc = DM(k, nn, i, j) + DM(j, nn, k, i) + DM(i, nn, j, k);
            R.cyclic_m = std::max(R.cyclic_m, std::fabs(cyc) / sM);
          }
    const Ten4 T = t_tensor(pf, y);
    Ten5 nal(n);
    for (int l = 0; l < n; ++l)
      for (int h = 0; h < n; ++h)
        for (int m = 0; m < n; ++m)
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
              double s = 0.0;
              for (int r = 0; r < n; ++r) s += pf.a(m, r) * na(l, h, r, i, j);
              nal(l, h, m, i, j) = s;
            }
    Ten5 Drho(n);
    for (int l = 0; l < n; ++l)
      for (int k = 0; k < n; ++k)
        for (int nn = 0; nn < n; ++nn)
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
              double s = 0.0;
              for (int h = 0; h < n; ++h)
                for (int m = 0; m < n; ++m) s += T(k, nn, h, m) * nal(l, h, m, i, j);
              Drho(l, k, nn, i, j) = s;
            }
    for (int l = 0; l < n; ++l)
      for (int k = 0; k < n; ++k)
        for (int nn = 0; nn < n; ++nn)
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
              const double cyc = Drho(l, k, nn, i, j) + Drho(j, k, nn, l, i) + Drho(i, k, nn, j, l);
              R.cyclic_rho = std::max(R.cyclic_rho, std::fabs(cyc) / sRho);
            }
  }

  // covariant constancy of the T-form kernel
  {
    const Ten4 T = t_tensor(pf, y);
    std::vector<Ten4> dT(n);
    for (int l = 0; l < n; ++l)
      dT[l] = fd_dx([&](const Vec& xx) { return t_tensor(point_frame(model, xx), y); }, x, l, kFdStep);
    const auto yjT = lift(y, 2);
    const auto PjT = scalar_pack<Jet>(pf, yjT);
    const auto covT = covector(pf, yjT, PjT);
    const auto tjT = t_map(pf, yjT, PjT);
    std::vector<Jet> cov1, t1, jj1;
    for (int i = 0; i < n; ++i) {
      cov1.push_back(jet_truncate(covT[i], 1));
      t1.push_back(jet_truncate(tjT[i], 1));
    }
    for (int m = 0; m < n; ++m)
      for (int k = 0; k < n; ++k) jj1.push_back(jet_derivative(tjT[m], k));
    Jet pj = pow(jet_truncate(PjT.K, 1), 1.0 - pf.h) * (1.0 / pf.h);
    Jet K2 = jet_truncate(PjT.K, 1) * jet_truncate(PjT.K, 1);
    const double sT = 1.0 + max_abs(T);
    for (int k = 0; k < n; ++k)
      for (int nn = 0; nn < n; ++nn)
        for (int h = 0; h < n; ++h)
          for (int m = 0; m < n; ++m) {
            Jet e = pj * pj *
                    ((jj1[h * n + k] * jj1[m * n + nn] - jj1[m * n + k] * jj1[h * n + nn]) * 0.5 +
                     (cov1[k] * t1[h] * jj1[m * n + nn] - cov1[nn] * t1[h] * jj1[m * n + k]) *
                         ((1.0 - pf.h) / K2));
            for (int l = 0; l < n; ++l) {
              double v = dT[l](k, nn, h, m);
              for (int u = 0; u < n; ++u) v += cd.N(u, l) * e.d1(u);
              for (int tt = 0; tt < n; ++tt)
                v += -cd.D(tt, l, k) * T(tt, nn, h, m) - cd.D(tt, l, nn) * T(k, tt, h, m) +
                     pf.gamma(h, l, tt) * T(k, nn, tt, m) + pf.gamma(m, l, tt) * T(k, nn, h, tt);
              R.dT = std::max(R.dT, std::fabs(v) / sT);
            }
          }
  }

  const TestField tf = make_test_field(n);

  // commutator identity on the test field
  {
    // (D_dir w) as plain numbers at displaced base points
    auto V_plain = [&](const Vec& xx, int dir) {
      const PointFrame pfx = point_frame(model, xx);
      const ConnectionData cdx = connection_data(pfx, y);
      const auto w = field_eval(tf, xx, y);
      const auto dwdx = field_dx(tf, xx, y, dir);
      std::vector<double> V(static_cast<size_t>(n) * n);
      for (int nn = 0; nn < n; ++nn)
        for (int k = 0; k < n; ++k) {
          double v = dwdx[static_cast<size_t>(nn) * n + k];
          for (int u = 0; u < n; ++u)
            v += cdx.N(u, dir) * field_dv(tf, y, u)[static_cast<size_t>(nn) * n + k];
          for (int h = 0; h < n; ++h)
            v += cdx.D(nn, dir, h) * w[static_cast<size_t>(h) * n + k] -
                 cdx.D(h, dir, k) * w[static_cast<size_t>(nn) * n + h];
          V[static_cast<size_t>(nn) * n + k] = v;
        }
      return V;
    };
    // same with first fiber derivatives, at the base point
    auto V_jets = [&](int dir) {
      const auto yj1 = lift(y, 1);
      const auto yj2 = lift(y, 2);
      const auto N2j = n_closed(pf, yj2, scalar_pack<Jet>(pf, yj2));
      const auto N1j = n_closed(pf, yj1, scalar_pack<Jet>(pf, yj1));
      const auto w = field_eval(tf, x, yj1);
      const auto dwdx = field_dx(tf, x, yj1, dir);
      std::vector<Jet> V(static_cast<size_t>(n) * n, make_const(w[0], 0.0));
      for (int nn = 0; nn < n; ++nn)
        for (int k = 0; k < n; ++k) {
          Jet v = dwdx[static_cast<size_t>(nn) * n + k];
          for (int u = 0; u < n; ++u)
            v += N1j[static_cast<size_t>(u) * n + dir] *
                 field_dv(tf, yj1, u)[static_cast<size_t>(nn) * n + k];
          for (int h = 0; h < n; ++h) {
            Jet Dnh = -jet_derivative(N2j[static_cast<size_t>(nn) * n + dir], h);
            Jet Dhk = -jet_derivative(N2j[static_cast<size_t>(h) * n + dir], k);
            v += Dnh * w[static_cast<size_t>(h) * n + k] - Dhk * w[static_cast<size_t>(nn) * n + h];
          }
          V[static_cast<size_t>(nn) * n + k] = v;
        }
      return V;
    };
    const Ten4 rho = rhoC;
    const auto w0 = field_eval<double>(tf, x, y);
    double scale = 1.0 + max_abs(Vec(w0)) * (1.0 + max_abs(M) + max_abs(rho));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const auto Vj = V_jets(j);
        const auto Vi = V_jets(i);
        const std::vector<double> dVj_dxi =
            fd_dx([&](const Vec& xx) { return V_plain(xx, j); }, x, i, kFdStep);
        const std::vector<double> dVi_dxj =
            fd_dx([&](const Vec& xx) { return V_plain(xx, i); }, x, j, kFdStep);
        for (int nn = 0; nn < n; ++nn)
          for (int k = 0; k < n; ++k) {
            double lhs = dVj_dxi[static_cast<size_t>(nn) * n + k] -
                         dVi_dxj[static_cast<size_t>(nn) * n + k];
            for (int u = 0; u < n; ++u)
              lhs += cd.N(u, i) * Vj[static_cast<size_t>(nn) * n + k].d1(u) -
                     cd.N(u, j) * Vi[static_cast<size_t>(nn) * n + k].d1(u);
            for (int h = 0; h < n; ++h)
              lhs += cd.D(nn, i, h) * Vj[static_cast<size_t>(h) * n + k].value() -
                     cd.D(h, i, k) * Vj[static_cast<size_t>(nn) * n + h].value() -
                     cd.D(nn, j, h) * Vi[static_cast<size_t>(h) * n + k].value() +
                     cd.D(h, j, k) * Vi[static_cast<size_t>(nn) * n + h].value();
            double rhs = 0.0;
            for (int h = 0; h < n; ++h) {
              // S_h w^n_k
              double Sw = field_dv(tf, y, h)[static_cast<size_t>(nn) * n + k];
              for (int m = 0; m < n; ++m)
                Sw += md.C_mixed(nn, h, m) * w0[static_cast<size_t>(m) * n + k] -
                      md.C_mixed(m, h, k) * w0[static_cast<size_t>(nn) * n + m];
              rhs += M(h, i, j) * Sw;
              rhs += -rho(k, h, i, j) * w0[static_cast<size_t>(nn) * n + h] +
                     rho(h, nn, i, j) * w0[static_cast<size_t>(h) * n + k];
            }
            R.commutator = std::max(R.commutator, std::fabs(lhs - rhs) / scale);
          }
      }
  }

  // derivative transitivity on the lifted field
  {
    auto w_plain = [&](const Vec& xx) {
      const PointFrame pfx = point_frame(model, xx);
      const auto yj = lift(y, 1);
      const auto tj = t_map(pfx, yj, scalar_pack<Jet>(pfx, yj));
      Mat jacx(n);
      Vec tx(n);
      for (int m = 0; m < n; ++m) {
        tx[m] = tj[m].value();
        for (int k = 0; k < n; ++k) jacx(m, k) = tj[m].d1(k);
      }
      const Mat yinvx = inverse_jacobian(jacx);
      const auto W = field_eval(tf, xx, tx);
      std::vector<double> w(static_cast<size_t>(n) * n, 0.0);
      for (int nn = 0; nn < n; ++nn)
        for (int m = 0; m < n; ++m) {
          double s = 0.0;
          for (int h = 0; h < n; ++h)
            for (int j = 0; j < n; ++j)
              s += yinvx(nn, h) * jacx(j, m) * W[static_cast<size_t>(h) * n + j];
          w[static_cast<size_t>(nn) * n + m] = s;
        }
      return w;
    };
    // fiber jets of w at the base point
    const auto yj2 = lift(y, 2);
    const auto tj2 = t_map(pf, yj2, scalar_pack<Jet>(pf, yj2));
    std::vector<Jet> jjac, t1;
    for (int m = 0; m < n; ++m) t1.push_back(jet_truncate(tj2[m], 1));
    for (int m = 0; m < n; ++m)
      for (int k = 0; k < n; ++k) jjac.push_back(jet_derivative(tj2[m], k));
    const auto yinvj = invert_flat(n, jjac);
    const auto Wj = field_eval(tf, x, t1);
    std::vector<Jet> wj(static_cast<size_t>(n) * n, make_const(t1[0], 0.0));
    for (int nn = 0; nn < n; ++nn)
      for (int m = 0; m < n; ++m) {
        Jet s = make_const(t1[0], 0.0);
        for (int h = 0; h < n; ++h)
          for (int j = 0; j < n; ++j)
            s += yinvj[static_cast<size_t>(nn) * n + h] * jjac[static_cast<size_t>(j) * n + m] *
                 Wj[static_cast<size_t>(h) * n + j];
        wj[static_cast<size_t>(nn) * n + m] = s;
      }
    const auto w0 = w_plain(x);
    const auto W0 = field_eval<double>(tf, x, t);
    const Mat L = riem_transport_coeffs(pf.gamma, t);
    const double scale = 1.0 + max_abs(Vec(w0));
    for (int i = 0; i < n; ++i) {
      const std::vector<double> dwdx = fd_dx(w_plain, x, i, kFdStep);
      for (int nn = 0; nn < n; ++nn)
        for (int m = 0; m < n; ++m) {
          double lhs = dwdx[static_cast<size_t>(nn) * n + m];
          for (int u = 0; u < n; ++u) lhs += cd.N(u, i) * wj[static_cast<size_t>(nn) * n + m].d1(u);
          for (int h = 0; h < n; ++h)
            lhs += cd.D(nn, i, h) * w0[static_cast<size_t>(h) * n + m] -
                   cd.D(h, i, m) * w0[static_cast<size_t>(nn) * n + h];
          double rhs = 0.0;
          for (int h = 0; h < n; ++h)
            for (int j = 0; j < n; ++j) {
              // nabla_i W^h_j
              double nw = field_dx(tf, x, t, i)[static_cast<size_t>(h) * n + j];
              for (int k = 0; k < n; ++k) {
                nw += L(k, i) * field_dv(tf, t, k)[static_cast<size_t>(h) * n + j];
                nw += pf.gamma(h, k, i) * W0[static_cast<size_t>(k) * n + j] -
                      pf.gamma(k, j, i) * W0[static_cast<size_t>(h) * n + k];
              }
              rhs += yinv(nn, h) * jac(j, m) * nw;
            }
          R.transit_deriv = std::max(R.transit_deriv, std::fabs(lhs - rhs) / scale);
        }
    }
  }

  return R;
}

}  // namespace fsgeo
