#include "fsgeo/angle.hpp"

#include <cmath>

#include "fsgeo/automorphism.hpp"

namespace fsgeo {

AngleData two_vector_angle(const PointFrame& pf, const Vec& y1, const Vec& y2) {
  const int n = pf.a.n();
  AngleData ad;
  const auto P1 = scalar_pack<double>(pf, y1);
  const auto P2 = scalar_pack<double>(pf, y2);
  ad.t1 = t_map(pf, y1, P1);
  ad.t2 = t_map(pf, y2, P2);
  ad.S1 = std::sqrt(quad(pf.a, ad.t1, ad.t1));
  ad.S2 = std::sqrt(quad(pf.a, ad.t2, ad.t2));
  double lam = quad(pf.a, ad.t1, ad.t2) / (ad.S1 * ad.S2);
  if (lam > 1.0 + 1e-9 || lam < -1.0 - 1e-9)
    throw NumericalInconsistencyError("two_vector_angle: cosine out of range");
  ad.lambda = std::clamp(lam, -1.0, 1.0);
  ad.alpha = std::acos(ad.lambda) / pf.h;
  ad.sigma1 = P1.q + 0.5 * pf.g * P1.b;
  ad.sigma2 = P2.q + 0.5 * pf.g * P2.b;
  double v12 = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) v12 += (pf.a(i, j) - pf.b_low[i] * pf.b_low[j]) * y1[i] * y2[j];
  ad.v12 = v12;
  if (pf.g != 0.0) {
    ad.z1 = P1.q * P1.K * P1.K * ad.sigma1 / (n * pf.g * P1.B);
    ad.z2 = P2.q * P2.K * P2.K * ad.sigma2 / (n * pf.g * P2.B);
  } else {
    ad.z1 = ad.z2 = std::nan("");
  }
  return ad;
}

LambdaDerivs dlambda_dy_closed(const PointFrame& pf, const Vec& y1, const Vec& y2) {
  if (pf.c != 1.0) throw DomainError("dlambda_dy_closed requires c = 1");
  const int n = pf.a.n();
  const double h = pf.h, g = pf.g;
  const auto P1 = scalar_pack<double>(pf, y1);
  const auto P2 = scalar_pack<double>(pf, y2);
  Vec v1(n), v2(n);
  for (int i = 0; i < n; ++i) {
    double a1 = 0.0, a2 = 0.0;
    for (int j = 0; j < n; ++j) {
      const double r = pf.a(i, j) - pf.b_low[i] * pf.b_low[j];
      a1 += r * y1[j];
      a2 += r * y2[j];
    }
    v1[i] = a1;
    v2[i] = a2;
  }
  double v12 = 0.0;
  for (int i = 0; i < n; ++i) v12 += v1[i] * y2[i];
  LambdaDerivs d;
  d.dy1.resize(n);
  d.dy2.resize(n);
  const double den1 = P1.B * std::sqrt(P1.B) * std::sqrt(P2.B);
  const double den2 = P2.B * std::sqrt(P2.B) * std::sqrt(P1.B);
  for (int k = 0; k < n; ++k) {
    d.dy1[k] = h * h *
               (P1.B * v2[k] + P1.q * P1.q * pf.b_low[k] * P2.A - P1.b * P2.A * v1[k] -
                v12 * (h * h * v1[k] + (pf.b_low[k] + 0.5 * g * v1[k] / P1.q) * P1.A)) /
               den1;
    d.dy2[k] = h * h *
               (P2.B * v1[k] + P2.q * P2.q * pf.b_low[k] * P1.A - P2.b * P1.A * v2[k] -
                v12 * (h * h * v2[k] + (pf.b_low[k] + 0.5 * g * v2[k] / P2.q) * P2.A)) /
               den2;
  }
  return d;
}

LambdaDerivs dlambda_dy_generic(const PointFrame& pf, const Vec& y1, const Vec& y2) {
  const int n = pf.a.n();
  const AutomorphismEval e1 = automorphism_eval(pf, y1);
  const AutomorphismEval e2 = automorphism_eval(pf, y2);
  const double lam = quad(pf.a, e1.t, e2.t) / (e1.S * e2.S);
  LambdaDerivs d;
  d.dy1.assign(n, 0.0);
  d.dy2.assign(n, 0.0);
  for (int k = 0; k < n; ++k)
    for (int m = 0; m < n; ++m) {
      double am2 = 0.0, am1 = 0.0;
      for (int nn = 0; nn < n; ++nn) {
        am2 += pf.a(m, nn) * e2.t[nn];
        am1 += pf.a(m, nn) * e1.t[nn];
      }
      d.dy1[k] += (am2 / (e1.S * e2.S) - am1 * lam / (e1.S * e1.S)) * e1.t_jac(m, k);
      d.dy2[k] += (am1 / (e2.S * e1.S) - am2 * lam / (e2.S * e2.S)) * e2.t_jac(m, k);
    }
  return d;
}

LambdaDerivs dlambda_dy_jets(const PointFrame& pf, const Vec& y1, const Vec& y2) {
  const int n = pf.a.n();
  const Vec t2 = t_map(pf, y2, scalar_pack<double>(pf, y2));
  const Vec t1 = t_map(pf, y1, scalar_pack<double>(pf, y1));
  LambdaDerivs d;
  auto grad = [&](const Vec& y, const Vec& other_t) {
    const auto yj = lift(y, 1);
    const auto tj = t_map(pf, yj, scalar_pack<Jet>(pf, yj));
    Jet num = tj[0] * make_const(tj[0], 0.0);
    Jet s2j = num;
    for (int m = 0; m < n; ++m)
      for (int nn = 0; nn < n; ++nn) {
        num += tj[m] * (pf.a(m, nn) * other_t[nn]);
        s2j += tj[m] * tj[nn] * pf.a(m, nn);
      }
    const double so = std::sqrt(quad(pf.a, other_t, other_t));
    Jet lam = num / (sqrt(s2j) * so);
    Vec out(n);
    for (int k = 0; k < n; ++k) out[k] = lam.d1(k);
    return out;
  };
  d.dy1 = grad(y1, t2);
  d.dy2 = grad(y2, t1);
  return d;
}

DLambdaDg dlambda_dg(const BackgroundModel& model, const Vec& x, const Vec& y1, const Vec& y2) {
  PointFrame pf = point_frame(model, x);
  if (pf.c != 1.0) throw DomainError("dlambda_dg requires c = 1");
  DLambdaDg out;
  const double dg = 1e-6;
  auto lam_at = [&](double gg) {
    PointFrame p2 = pf;
    p2.g = gg;
    p2.h = std::sqrt(1.0 - gg * gg / 4.0);
    return two_vector_angle(p2, y1, y2).lambda;
  };
  out.fd = (lam_at(pf.g + dg) - lam_at(pf.g - dg)) / (2.0 * dg);
  const AngleData ad = two_vector_angle(pf, y1, y2);
  const LambdaDerivs d = dlambda_dy_closed(pf, y1, y2);
  double b_d1 = 0.0, b_d2 = 0.0;
  for (int k = 0; k < pf.a.n(); ++k) {
    b_d1 += pf.b_up[k] * d.dy1[k];
    b_d2 += pf.b_up[k] * d.dy2[k];
  }
  const double h = pf.h;
  out.sigma_form = (ad.sigma1 * b_d1 + ad.sigma2 * b_d2) / (2.0 * h * h);
  if (pf.g != 0.0) {
    const MetricData m1 = metric_data(pf, y1);
    const MetricData m2 = metric_data(pf, y2);
    Vec C1(pf.a.n()), C2(pf.a.n());
    for (int k = 0; k < pf.a.n(); ++k) {
      double s1 = 0.0, s2 = 0.0;
      for (int i = 0; i < pf.a.n(); ++i) {
        s1 += m1.ginv(k, i) * m1.C_contr[i];
        s2 += m2.ginv(k, i) * m2.C_contr[i];
      }
      C1[k] = s1;
      C2[k] = s2;
    }
    double c_d1 = 0.0, c_d2 = 0.0;
    for (int k = 0; k < pf.a.n(); ++k) {
      c_d1 += C1[k] * d.dy1[k];
      c_d2 += C2[k] * d.dy2[k];
    }
    out.z_form = (ad.z1 * c_d1 + ad.z2 * c_d2) / (h * h);
  } else {
    out.z_form = std::nan("");
  }
  return out;
}

double angle_equation_residual(const PointFrame& pf, const Vec& y1, const Vec& y2) {
  const int n = pf.a.n();
  const auto P1 = scalar_pack<double>(pf, y1);
  const auto P2 = scalar_pack<double>(pf, y2);
  const Vec t1 = t_map(pf, y1, P1);
  const Vec t2 = t_map(pf, y2, P2);
  const double S1 = std::sqrt(quad(pf.a, t1, t1));
  const double S2 = std::sqrt(quad(pf.a, t2, t2));
  const double lam = quad(pf.a, t1, t2) / (S1 * S2);
  const auto D1 = scalar_pack_dx<double>(pf, y1, P1);
  const auto D2 = scalar_pack_dx<double>(pf, y2, P2);
  const auto dt1 = t_map_dx(pf, y1, P1, D1);
  const auto dt2 = t_map_dx(pf, y2, P2, D2);
  const LambdaDerivs dl = dlambda_dy_generic(pf, y1, y2);
  const Mat N1 = n_coeffs_closed(pf, y1);
  const Mat N2 = n_coeffs_closed(pf, y2);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    // d lambda / d x^i at fixed fiber arguments
    double num_x = 0.0, s1_x = 0.0, s2_x = 0.0;
    for (int m = 0; m < n; ++m)
      for (int nn = 0; nn < n; ++nn) {
        num_x += pf.da(i, m, nn) * t1[m] * t2[nn] +
                 pf.a(m, nn) * (dt1[i][m] * t2[nn] + t1[m] * dt2[i][nn]);
        s1_x += pf.da(i, m, nn) * t1[m] * t1[nn] + 2.0 * pf.a(m, nn) * dt1[i][m] * t1[nn];
        s2_x += pf.da(i, m, nn) * t2[m] * t2[nn] + 2.0 * pf.a(m, nn) * dt2[i][m] * t2[nn];
      }
    double v = num_x / (S1 * S2) - 0.5 * lam * (s1_x / (S1 * S1) + s2_x / (S2 * S2));
    for (int k = 0; k < n; ++k) v += N1(k, i) * dl.dy1[k] + N2(k, i) * dl.dy2[k];
    worst = std::max(worst, std::fabs(v));
  }
  return worst;
}

}  // namespace fsgeo
