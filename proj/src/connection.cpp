#include "fsgeo/connection.hpp"

#include <cmath>

namespace fsgeo {

Mat n_coeffs_assembled(const PointFrame& pf, const Vec& y) {
  const int n = pf.a.n();
  const MetricData md = metric_data(pf, y);
  const auto P = scalar_pack<double>(pf, y);
  const auto D = scalar_pack_dx<double>(pf, y, P);
  const double h = pf.h, g = pf.g;
  const double K = P.K, B = P.B, qt = P.qt, b = P.b;
  const double bt = b / pf.c;
  Mat N(n);
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i) {
      double v = -md.l_upper[m] * D.K[i];
      const double c1 = bt - (b + 0.5 * g * qt) / h;
      const double c2 = 1.0 / (h * qt) - (b * b + qt * qt) / (qt * B);
      for (int j = 0; j < n; ++j) {
        double nb_tj = 0.0;  // nabla_i bt_j
        nb_tj = pf.nabla_b(i, j) / pf.c;
        v += (c1 * md.Hproj(m, j) * (K * K / B) + c2 * K * md.m_upper[m] * y[j]) * nb_tj;
      }
      for (int t = 0; t < n; ++t) {
        const double hmt = (m == t ? 1.0 : 0.0) - md.l_upper[m] * md.l_lower[t];
        double gy = 0.0;
        for (int j = 0; j < n; ++j) gy += pf.gamma(t, i, j) * y[j];
        v -= hmt * gy;
      }
      N(m, i) = v;
    }
  return N;
}

Mat n_coeffs_from_tmap(const PointFrame& pf, const Vec& y) {
  const int n = pf.a.n();
  const auto yj = lift(y, 1);
  const auto Pj = scalar_pack<Jet>(pf, yj);
  const auto tj = t_map(pf, yj, Pj);
  Mat jac(n);
  Vec t(n);
  for (int m = 0; m < n; ++m) {
    t[m] = tj[m].value();
    for (int k = 0; k < n; ++k) jac(m, k) = tj[m].d1(k);
  }
  const Mat yinv = inverse_jacobian(jac);
  const auto P = scalar_pack<double>(pf, y);
  const auto D = scalar_pack_dx<double>(pf, y, P);
  const auto dt = t_map_dx(pf, y, P, D);  // [n][i]
  Mat N(n);
  for (int m = 0; m < n; ++m)
    for (int nn = 0; nn < n; ++nn) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) {
        double Ti = dt[nn][i];
        for (int k = 0; k < n; ++k) Ti += pf.gamma(i, k, nn) * t[k];
        s += yinv(m, i) * Ti;
      }
      N(m, nn) = -s;
    }
  return N;
}

Mat n_coeffs_transitivity(const BackgroundModel& model, const Vec& x, const Vec& y) {
  const int n = model.dim();
  const PointFrame pf = point_frame(model, x);
  const auto P = scalar_pack<double>(pf, y);
  const Vec t = t_map(pf, y, P);
  Mat N(n);
  for (int i = 0; i < n; ++i) {
    const Vec dyi = fd_dx(
        [&](const Vec& xx) { return inverse_map(point_frame(model, xx), t); }, x, i, kFdStep);
    for (int m = 0; m < n; ++m) N(m, i) = dyi[m];
  }
  // + y^n_h L^h_i with L^h_i = -a^h_{ik} t^k
  const auto yj = lift(y, 1);
  const auto tj = t_map(pf, yj, scalar_pack<Jet>(pf, yj));
  Mat jac(n);
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k) jac(m, k) = tj[m].d1(k);
  const Mat yinv = inverse_jacobian(jac);
  const Mat L = riem_transport_coeffs(pf.gamma, t);
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int h = 0; h < n; ++h) s += yinv(m, h) * L(h, i);
      N(m, i) += s;
    }
  return N;
}

ConnectionData connection_data(const PointFrame& pf, const Vec& y) {
  const int n = pf.a.n();
  const auto yj = lift(y, 2);
  const auto Pj = scalar_pack<Jet>(pf, yj);
  const auto Nf = n_closed(pf, yj, Pj);
  ConnectionData cd;
  cd.N = Mat(n);
  cd.D = Ten3(n);
  cd.N2 = Ten3(n);
  cd.N3 = Ten4(n);
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i) {
      const Jet& e = Nf[static_cast<size_t>(m) * n + i];
      cd.N(m, i) = e.value();
      for (int j = 0; j < n; ++j) {
        cd.N2(m, i, j) = e.d1(j);
        cd.D(m, i, j) = -e.d1(j);
        for (int k = 0; k < n; ++k) cd.N3(m, i, j, k) = e.d2(j, k);
      }
    }
  cd.s_tilde.resize(n);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int h = 0; h < n; ++h) s += pf.nabla_b(i, h) / pf.c * y[h];
    cd.s_tilde[i] = s;
  }
  const auto P = scalar_pack<double>(pf, y);
  cd.beta = Mat(n);
  const double bt = P.b / pf.c;
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i) {
      double nb = 0.0;
      for (int k = 0; k < n; ++k) nb += pf.ainv(m, k) * pf.nabla_b(i, k);
      nb /= pf.c;
      cd.beta(m, i) = nb - cd.s_tilde[i] * (y[m] - bt * pf.bt_up[m]) / (P.qt * P.qt);
    }
  return cd;
}

namespace {

// d C^k_{nj} / d y^u, assembled from the metric data.
Ten4 cartan_mixed_dy(const MetricData& md) {
  const int n = md.g.n();
  Ten4 out(n);
  for (int k = 0; k < n; ++k)
    for (int nn = 0; nn < n; ++nn)
      for (int j = 0; j < n; ++j)
        for (int u = 0; u < n; ++u) {
          double s = 0.0;
          for (int h = 0; h < n; ++h) {
            double dginv = 0.0;  // d g^{kh}/dy^u = -2 C^{kh}_u
            for (int a = 0; a < n; ++a)
              for (int b2 = 0; b2 < n; ++b2) dginv -= 2.0 * md.ginv(k, a) * md.C_low(a, b2, u) * md.ginv(b2, h);
            s += dginv * md.C_low(h, nn, j) + md.ginv(k, h) * md.dC_low(h, nn, j, u);
          }
          out(k, nn, j, u) = s;
        }
  return out;
}

}  // namespace

CovariantResiduals covariant_suite(const BackgroundModel& model, const Vec& x, const Vec& y) {
  const PointFrame pf = point_frame(model, x);
  const int n = pf.a.n();
  const double h = pf.h;
  const MetricData md = metric_data(pf, y);
  const ConnectionData cd = connection_data(pf, y);
  const auto P = scalar_pack<double>(pf, y);
  const auto Dx = scalar_pack_dx<double>(pf, y, P);
  CovariantResiduals R;

  // scales for relative residuals
  const double sK = 1.0 + std::fabs(P.K);
  const double sg = 1.0 + max_abs(md.g);
  const double sN = 1.0 + max_abs(cd.N);

  // metric function
  for (int nn = 0; nn < n; ++nn) {
    double v = Dx.K[nn];
    for (int m = 0; m < n; ++m) v += cd.N(m, nn) * md.l_lower[m];
    R.dK = std::max(R.dK, std::fabs(v) / sK);
  }

  // covariant tangent vector and metric tensor; x-partials from jets of the
  // closed-form covector gradient
  {
    const auto yj = lift(y, 1);
    const auto Pj = scalar_pack<Jet>(pf, yj);
    const auto Dj = scalar_pack_dx<Jet>(pf, yj, Pj);
    for (int nn = 0; nn < n; ++nn) {
      const auto dyj = covector_dx(pf, yj, Pj, Dj, nn);
      for (int j = 0; j < n; ++j) {
        double v = dyj[j].value();
        for (int m = 0; m < n; ++m) v += cd.N(m, nn) * md.g(m, j) - cd.D(m, nn, j) * md.y_lower[m];
        R.dy_lower = std::max(R.dy_lower, std::fabs(v) / sK);
        for (int i = 0; i < n; ++i) {
          double w = dyj[j].d1(i);  // d g_ji / d x^nn
          for (int m = 0; m < n; ++m)
            w += 2.0 * cd.N(m, nn) * md.C_low(m, i, j) - cd.D(m, nn, j) * md.g(m, i) -
                 cd.D(m, nn, i) * md.g(m, j);
          R.dg = std::max(R.dg, std::fabs(w) / sg);
        }
      }
    }
  }

  // forward map and its Jacobian
  {
    const auto yj = lift(y, 2);
    const auto Pj = scalar_pack<Jet>(pf, yj);
    const auto tj = t_map(pf, yj, Pj);
    const auto yj1 = lift(y, 1);
    const auto Pj1 = scalar_pack<Jet>(pf, yj1);
    const auto Dj1 = scalar_pack_dx<Jet>(pf, yj1, Pj1);
    const auto dtj = t_map_dx(pf, yj1, Pj1, Dj1);  // [n][i] jets: value d t^i/dx^n, d1 = Jacobian's x-derivative
    Vec t(n);
    Mat tjac(n);
    for (int i = 0; i < n; ++i) {
      t[i] = tj[i].value();
      for (int m = 0; m < n; ++m) tjac(i, m) = tj[i].d1(m);
    }
    const double st = 1.0 + max_abs(t);
    const double stj = 1.0 + max_abs(tjac);
    for (int nn = 0; nn < n; ++nn)
      for (int i = 0; i < n; ++i) {
        double v = dtj[nn][i].value();
        for (int k = 0; k < n; ++k) v += cd.N(k, nn) * tjac(i, k) + pf.gamma(i, k, nn) * t[k];
        R.dt = std::max(R.dt, std::fabs(v) / st);
        for (int m = 0; m < n; ++m) {
          double w = dtj[nn][i].d1(m);
          for (int k = 0; k < n; ++k) w += cd.N(k, nn) * tj[i].d2(m, k);
          for (int hh = 0; hh < n; ++hh) w -= cd.D(hh, nn, m) * tjac(i, hh);
          for (int l = 0; l < n; ++l) w += pf.gamma(i, nn, l) * tjac(l, m);
          R.dt_jac = std::max(R.dt_jac, std::fabs(w) / stj);
        }
      }

    // deformation tensor: defo^m_k = p t^m_k
    const double p = std::pow(P.K, 1.0 - h) / h;
    const double dp_fac = (1.0 - h) / h;  // d p = dp_fac K^{-h} dK
    for (int nn = 0; nn < n; ++nn)
      for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k) {
          double v = dp_fac * std::pow(P.K, -h) * Dx.K[nn] * tjac(m, k) + p * dtj[nn][m].d1(k);
          for (int u = 0; u < n; ++u) {
            const double dp_dy = dp_fac * std::pow(P.K, -h) * md.l_lower[u];
            v += cd.N(u, nn) * (dp_dy * tjac(m, k) + p * tj[m].d2(k, u));
          }
          for (int hh = 0; hh < n; ++hh) v -= cd.D(hh, nn, k) * p * tjac(m, hh);
          for (int l = 0; l < n; ++l) v += pf.gamma(m, nn, l) * p * tjac(l, k);
          R.ddefo = std::max(R.ddefo, std::fabs(v) / (1.0 + p * stj));
        }

    // inverse Jacobian, the one x-differenced certificate here
    const Mat yinv = inverse_jacobian(tjac);
    const Ten3 ysec = inverse_second(pf, y);
    const Mat L = riem_transport_coeffs(pf.gamma, t);
    auto yinv_at = [&](const Vec& xx) {
      const PointFrame pfx = point_frame(model, xx);
      const Vec yx = inverse_map(pfx, t);
      const auto yjx = lift(yx, 1);
      const auto tjx = t_map(pfx, yjx, scalar_pack<Jet>(pfx, yjx));
      Mat jac(n);
      for (int a = 0; a < n; ++a)
        for (int b2 = 0; b2 < n; ++b2) jac(a, b2) = tjx[a].d1(b2);
      return inverse_jacobian(jac);
    };
    for (int i = 0; i < n; ++i) {
      const Mat dyinv = fd_dx(yinv_at, x, i, kFdStep);
      for (int nn = 0; nn < n; ++nn)
        for (int k = 0; k < n; ++k) {
          double v = dyinv(nn, k);
          for (int hh = 0; hh < n; ++hh) v += L(hh, i) * ysec(nn, k, hh);
          for (int s = 0; s < n; ++s) v += cd.D(nn, i, s) * yinv(s, k);
          for (int hh = 0; hh < n; ++hh) v -= pf.gamma(hh, i, k) * yinv(nn, hh);
          R.dinv_jac = std::max(R.dinv_jac, std::fabs(v) / (1.0 + max_abs(yinv)));
        }
    }

    // metric-function transport in its background form
    for (int m = 0; m < n; ++m) {
      double Ts = 0.0;
      for (int s = 0; s < n; ++s) {
        double Tsm = dtj[m][s].value();
        for (int hh = 0; hh < n; ++hh) Tsm += pf.gamma(s, m, hh) * t[hh];
        double tlow = 0.0;
        for (int r = 0; r < n; ++r) tlow += pf.a(s, r) * t[r];
        Ts += tlow * Tsm;
      }
      const double lhs = Dx.K[m];
      const double rhs = std::pow(P.K, 2.0 * (1.0 - h)) * Ts / (P.K * h);
      R.dF_xform = std::max(R.dF_xform, std::fabs(lhs - rhs) / sK);
    }
  }

  // Cartan-tensor transport against the second derivative coefficients
  {
    const Ten4 dCdy = cartan_mixed_dy(md);
    // x-partials of C^k_{nj}
    const auto yj = lift(y, 2);
    const auto Pj = scalar_pack<Jet>(pf, yj);
    const auto Dj = scalar_pack_dx<Jet>(pf, yj, Pj);
    for (int m = 0; m < n; ++m) {
      const auto dyj = covector_dx(pf, yj, Pj, Dj, m);  // jets: d2 gives 2 dC_low/dx
      Ten3 dC_dx(n);
      for (int i = 0; i < n; ++i)
        for (int a = 0; a < n; ++a)
          for (int b2 = 0; b2 < n; ++b2) dC_dx(i, a, b2) = 0.5 * dyj[i].d2(a, b2);
      Mat dg_dx(n);
      for (int i = 0; i < n; ++i)
        for (int a = 0; a < n; ++a) dg_dx(i, a) = dyj[i].d1(a);
      for (int k = 0; k < n; ++k)
        for (int nn = 0; nn < n; ++nn)
          for (int j = 0; j < n; ++j) {
            // d_m C^k_{nj}
            double v = 0.0;
            for (int hh = 0; hh < n; ++hh) {
              double dginv = 0.0;
              for (int a = 0; a < n; ++a)
                for (int b2 = 0; b2 < n; ++b2) dginv -= md.ginv(k, a) * dg_dx(a, b2) * md.ginv(b2, hh);
              v += dginv * md.C_low(hh, nn, j) + md.ginv(k, hh) * dC_dx(hh, nn, j);
            }
            for (int u = 0; u < n; ++u) v += cd.N(u, m) * dCdy(k, nn, j, u);
            // - N^k_{mt} C^t_{nj} + N^t_{mn} C^k_{tj} + N^t_{mj} C^k_{nt}
            for (int t = 0; t < n; ++t)
              v += -cd.N2(k, m, t) * md.C_mixed(t, nn, j) + cd.N2(t, m, nn) * md.C_mixed(k, t, j) +
                   cd.N2(t, m, j) * md.C_mixed(k, nn, t);
            const double res = cd.N3(k, m, nn, j) + v;
            R.prop32 = std::max(R.prop32, std::fabs(res) / sN);
          }
    }
  }
  return R;
}

ContractionResiduals connection_contractions(const PointFrame& pf, const Vec& y) {
  const int n = pf.a.n();
  const double h = pf.h, g = pf.g;
  const auto P = scalar_pack<double>(pf, y);
  const auto Dx = scalar_pack_dx<double>(pf, y, P);
  const ConnectionData cd = connection_data(pf, y);
  const MetricData md = metric_data(pf, y);
  ContractionResiduals R;
  const Vec u = mat_vec(pf.a, y);
  Vec s(n);  // s_n = y^j nabla_n b_j (unnormalised axis)
  for (int nn = 0; nn < n; ++nn) {
    double v = 0.0;
    for (int j = 0; j < n; ++j) v += pf.nabla_b(nn, j) * y[j];
    s[nn] = v;
  }
  const double scale = 1.0 + max_abs(cd.N) * (1.0 + max_abs(u));
  for (int nn = 0; nn < n; ++nn) {
    double gy_u = 0.0, gy_b = 0.0;
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) {
        gy_u += u[k] * pf.gamma(k, nn, j) * y[j];
        gy_b += pf.b_low[k] * pf.gamma(k, nn, j) * y[j];
      }
    double uN = 0.0, bN = 0.0, lN = 0.0;
    for (int k = 0; k < n; ++k) {
      uN += u[k] * cd.N(k, nn);
      bN += pf.b_low[k] * cd.N(k, nn);
      lN += md.l_lower[k] * cd.N(k, nn);
    }
    R.uN = std::max(R.uN, std::fabs(uN + g * P.q * s[nn] / h + gy_u) / scale);
    R.bN = std::max(R.bN, std::fabs(bN - (1.0 - h) * s[nn] / h + gy_b) / scale);
    // d_n b = (1/h) s_n
    double dnb = Dx.b[nn] + bN;
    R.d_b = std::max(R.d_b, std::fabs(dnb - s[nn] / h) / (1.0 + std::fabs(P.b)));
    // d_n B = -(g/(q h)) B s_n
    const auto yj = lift(y, 1);
    const auto Pj = scalar_pack<Jet>(pf, yj);
    double dnB = Dx.B[nn];
    for (int k = 0; k < n; ++k) dnB += cd.N(k, nn) * Pj.B.d1(k);
    R.d_B = std::max(R.d_B, std::fabs(dnB + g * P.B * s[nn] / (P.q * h)) / (1.0 + std::fabs(P.B)));
    // l_h N^h_i = -K (g qt / B) s~_i - l_t Gamma^t_{ih} y^h
    double gy_l = 0.0;
    for (int t = 0; t < n; ++t)
      for (int hh = 0; hh < n; ++hh) gy_l += md.l_lower[t] * pf.gamma(t, nn, hh) * y[hh];
    const double want = -P.K * g * P.qt / P.B * cd.s_tilde[nn] - gy_l;
    R.lN = std::max(R.lN, std::fabs(lN - want) / (1.0 + std::fabs(P.K)));
  }
  // orthogonality of the frame pieces
  for (int i = 0; i < n; ++i) {
    double bm = 0.0, lm = 0.0, am = 0.0;
    for (int m = 0; m < n; ++m) {
      bm += cd.beta(m, i) * pf.b_low[m];
      lm += cd.beta(m, i) * md.l_lower[m];
      am += cd.beta(m, i) * md.m_lower[m];
    }
    R.orth = std::max({R.orth, std::fabs(bm), std::fabs(lm), std::fabs(am)});
  }
  double ml = 0.0;
  for (int m = 0; m < n; ++m) ml += md.m_upper[m] * md.l_lower[m];
  R.orth = std::max(R.orth, std::fabs(ml));
  return R;
}

ConnHomogeneity connection_homogeneity(const PointFrame& pf, const Vec& y, double k) {
  Vec ky = y;
  for (double& v : ky) v *= k;
  const ConnectionData a = connection_data(pf, y);
  const ConnectionData b = connection_data(pf, ky);
  ConnHomogeneity r;
  double worst = 0.0;
  for (size_t i = 0; i < a.N.raw().size(); ++i)
    worst = std::max(worst, std::fabs(b.N.raw()[i] - k * a.N.raw()[i]));
  r.N = worst / (1.0 + k * max_abs(a.N));
  worst = 0.0;
  for (size_t i = 0; i < a.D.raw().size(); ++i)
    worst = std::max(worst, std::fabs(b.D.raw()[i] - a.D.raw()[i]));
  r.D = worst / (1.0 + max_abs(a.D));
  return r;
}

}  // namespace fsgeo
