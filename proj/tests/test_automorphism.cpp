#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fsgeo/automorphism.hpp"
#include "fsgeo/sampling.hpp"

using namespace fsgeo;

namespace {

const Vec kX{0.15, -0.2, 0.3};

PointFrame frame(CanonicalModel which, int dim = 3, double c = 1.0, double g = 0.8) {
  Vec x(dim, 0.0);
  for (int i = 0; i < dim && i < 3; ++i) x[i] = kX[i];
  auto m = make_model(which, dim, c, g);
  return point_frame(*m, x);
}

const std::vector<CanonicalModel> kAll{CanonicalModel::FlatConstant, CanonicalModel::FlatRotating,
                                       CanonicalModel::ConformalRotating,
                                       CanonicalModel::ConstantCurvature};

}  // namespace

TEST_CASE("norm transit and homogeneity of the forward map") {
  Sampler smp(101);
  for (auto which : kAll)
    for (double c : {1.0, 0.8})
      for (double g : {0.0, 0.6, -1.2}) {
        const PointFrame pf = frame(which, 3, c, g);
        for (int trial = 0; trial < 10; ++trial) {
          const Vec y = smp.y_admissible(pf);
          const auto P = scalar_pack<double>(pf, y);
          const Vec t = t_map(pf, y, P);
          const double S = std::sqrt(quad(pf.a, t, t));
          CHECK(S == doctest::Approx(std::pow(P.K, pf.h)).epsilon(1e-9));
          // degree-h homogeneity
          Vec ky = y;
          for (double& v : ky) v *= 1.7;
          const Vec tk = t_map(pf, ky, scalar_pack<double>(pf, ky));
          for (int i = 0; i < 3; ++i)
            CHECK(tk[i] == doctest::Approx(std::pow(1.7, pf.h) * t[i]).epsilon(1e-9));
          // unit vectors to unit vectors
          Vec yu = y;
          for (double& v : yu) v /= P.K;
          const Vec tu = t_map(pf, yu, scalar_pack<double>(pf, yu));
          CHECK(std::sqrt(quad(pf.a, tu, tu)) == doctest::Approx(1.0).epsilon(1e-9));
        }
      }
}

TEST_CASE("zero charge collapses the map to the identity") {
  const PointFrame pf = frame(CanonicalModel::ConformalRotating, 3, 1.0, 0.0);
  Sampler smp(5);
  const Vec y = smp.y_admissible(pf);
  const Vec t = t_map(pf, y, scalar_pack<double>(pf, y));
  for (int i = 0; i < 3; ++i) CHECK(t[i] == doctest::Approx(y[i]).epsilon(1e-12));
  const AutomorphismEval ev = automorphism_eval(pf, y);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(ev.t_jac(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
      CHECK(ev.defo(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
    }
}

TEST_CASE("axis-limit alignment of the image") {
  const PointFrame pf = frame(CanonicalModel::FlatRotating, 3, 1.0, 1.2);
  Vec perp{0.0, 0.0, 1.0};
  Vec y(3);
  for (int i = 0; i < 3; ++i) y[i] = pf.b_up[i] + 1e-4 * perp[i];
  const Vec t = t_map(pf, y, scalar_pack<double>(pf, y));
  // component of t orthogonal to the axis is an O(qt) fraction of |t|
  double tb = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) tb += pf.a(i, j) * t[i] * pf.bt_up[j];
  double orth2 = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double oi = t[i] - tb * pf.bt_up[i];
    for (int j = 0; j < 3; ++j) orth2 += pf.a(i, j) * oi * (t[j] - tb * pf.bt_up[j]);
  }
  CHECK(std::sqrt(orth2) / std::sqrt(quad(pf.a, t, t)) < 1e-3);
}

TEST_CASE("jacobian identities") {
  Sampler smp(33);
  for (auto which : kAll)
    for (double c : {1.0, 0.8})
      for (double g : {0.6, -1.2}) {
        const PointFrame pf = frame(which, 3, c, g);
        for (int trial = 0; trial < 8; ++trial) {
          const Vec y = smp.y_admissible(pf);
          const AutomorphismEval ev = automorphism_eval(pf, y);
          const auto P = scalar_pack<double>(pf, y);
          const double K = P.K, h = pf.h;
          // Euler identity
          for (int m = 0; m < 3; ++m) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += ev.t_jac(m, k) * y[k];
            CHECK(s == doctest::Approx(h * ev.t[m]).epsilon(1e-9));
          }
          // conformality of the jacobian
          const MetricData md = metric_data(pf, y);
          const double scale = std::pow(K, 2.0 * (h - 1.0));
          for (int k = 0; k < 3; ++k)
            for (int l = 0; l < 3; ++l) {
              double s = 0.0;
              for (int m = 0; m < 3; ++m)
                for (int nn = 0; nn < 3; ++nn) s += pf.a(m, nn) * ev.t_jac(m, k) * ev.t_jac(nn, l);
              CHECK(std::fabs(s / (h * h) - scale * md.g(k, l)) < 1e-8 * (1.0 + scale * max_abs(md.g)));
              // deformation tensor reproduces the metric
              double d = 0.0;
              for (int m = 0; m < 3; ++m)
                for (int nn = 0; nn < 3; ++nn) d += pf.a(m, nn) * ev.defo(m, k) * ev.defo(nn, l);
              CHECK(std::fabs(d - md.g(k, l)) < 1e-8 * (1.0 + max_abs(md.g)));
            }
          // defo contraction with y
          for (int m = 0; m < 3; ++m) {
            double s = 0.0;
            for (int nn = 0; nn < 3; ++nn) s += ev.defo(m, nn) * y[nn];
            CHECK(s == doctest::Approx(std::pow(K, 1.0 - h) * ev.t[m]).epsilon(1e-9));
          }
          // degree-0 homogeneity of defo
          Vec ky = y;
          for (double& v : ky) v *= 2.3;
          const AutomorphismEval evk = automorphism_eval(pf, ky);
          for (int m = 0; m < 3; ++m)
            for (int nn = 0; nn < 3; ++nn)
              CHECK(evk.defo(m, nn) == doctest::Approx(ev.defo(m, nn)).epsilon(1e-9));
        }
      }
}

TEST_CASE("second-jet pair identities") {
  Sampler smp(55);
  for (double c : {1.0, 0.8}) {
    const PointFrame pf = frame(CanonicalModel::ConformalRotating, 3, c, 1.0);
    for (int trial = 0; trial < 8; ++trial) {
      const Vec y = smp.y_admissible(pf);
      const auto yj = lift(y, 2);
      const auto Pj = scalar_pack<Jet>(pf, yj);
      const auto tj = t_map(pf, yj, Pj);
      const MetricData md = metric_data(pf, y);
      const double K = md.s.K, h = pf.h;
      const double p2 = std::pow(std::pow(K, 1.0 - h) / h, 2);
      Vec t(3);
      Mat jac(3);
      Ten3 t2(3);
      for (int m = 0; m < 3; ++m) {
        t[m] = tj[m].value();
        for (int k = 0; k < 3; ++k) {
          jac(m, k) = tj[m].d1(k);
          for (int l = 0; l < 3; ++l) t2(m, k, l) = tj[m].d2(k, l);
        }
      }
      Mat ang(3);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) ang(i, j) = md.g(i, j) - md.l_lower[i] * md.l_lower[j];
      // p^2 t^i_{mk} t^j a_ij = (1/h - 1)(ang_km - l_k l_m)
      for (int m = 0; m < 3; ++m)
        for (int k = 0; k < 3; ++k) {
          double s = 0.0;
          for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) s += p2 * t2(i, m, k) * t[j] * pf.a(i, j);
          const double want = (1.0 / h - 1.0) * (ang(k, m) - md.l_lower[k] * md.l_lower[m]);
          CHECK(std::fabs(s - want) < 1e-7 * (1.0 + std::fabs(want)));
        }
      // skew identity between the two Jacobian-gradient couplings
      for (int m = 0; m < 3; ++m)
        for (int nn = 0; nn < 3; ++nn)
          for (int k = 0; k < 3; ++k) {
            double s = (1.0 - h) * 2.0 / K *
                       (md.l_lower[k] * md.g(m, nn) - md.l_lower[m] * md.g(k, nn));
            for (int i = 0; i < 3; ++i)
              for (int j = 0; j < 3; ++j)
                s += p2 * (jac(i, m) * t2(j, nn, k) - jac(i, k) * t2(j, nn, m)) * pf.a(i, j);
            CHECK(std::fabs(s) < 1e-7 * (1.0 + max_abs(md.g)));
          }
      // t_h t^h_{ni} = h(1-h) K^{2(h-1)} (g_ni - 2 l_n l_i)
      const double sc = h * (1.0 - h) * std::pow(K, 2.0 * (h - 1.0));
      for (int nn = 0; nn < 3; ++nn)
        for (int i = 0; i < 3; ++i) {
          double s = 0.0;
          for (int hh = 0; hh < 3; ++hh) {
            double tlow = 0.0;
            for (int r = 0; r < 3; ++r) tlow += pf.a(hh, r) * t[r];
            s += tlow * t2(hh, nn, i);
          }
          const double want = sc * (md.g(nn, i) - 2.0 * md.l_lower[nn] * md.l_lower[i]);
          CHECK(std::fabs(s - want) < 1e-7 * (1.0 + std::fabs(want)));
        }
      // t_h t^h_n = h K^{2(h-1)} y_n
      for (int nn = 0; nn < 3; ++nn) {
        double s = 0.0;
        for (int hh = 0; hh < 3; ++hh) {
          double tlow = 0.0;
          for (int r = 0; r < 3; ++r) tlow += pf.a(hh, r) * t[r];
          s += tlow * jac(hh, nn);
        }
        CHECK(s == doctest::Approx(h * std::pow(K, 2.0 * (h - 1.0)) * md.y_lower[nn]).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("inverse map round trip, homogeneity, and jets") {
  Sampler smp(77);
  for (auto which : kAll)
    for (double c : {1.0, 0.8})
      for (double g : {0.0, 0.6, -1.2, 1.8}) {
        const PointFrame pf = frame(which, 3, c, g);
        for (int trial = 0; trial < 8; ++trial) {
          const Vec y = smp.y_admissible(pf);
          const Vec t = t_map(pf, y, scalar_pack<double>(pf, y));
          const Vec yb = inverse_map(pf, t);
          for (int i = 0; i < 3; ++i)
            CHECK(yb[i] == doctest::Approx(y[i]).epsilon(1e-10));
          // homogeneity of the inverse
          Vec kt = t;
          for (double& v : kt) v *= 3.1;
          const Vec yk = inverse_map(pf, kt);
          for (int i = 0; i < 3; ++i)
            CHECK(yk[i] == doctest::Approx(std::pow(3.1, 1.0 / pf.h) * y[i]).epsilon(1e-8));
          if (g == 0.0 && c == 1.0)
            for (int i = 0; i < 3; ++i) CHECK(yb[i] == doctest::Approx(t[i]).epsilon(1e-10));
          // y^i_n t^n = y^i / h through the inverse jacobian
          const AutomorphismEval ev = automorphism_eval(pf, y);
          const Mat yinv = inverse_jacobian(ev.t_jac);
          for (int i = 0; i < 3; ++i) {
            double s = 0.0;
            for (int nn = 0; nn < 3; ++nn) s += yinv(i, nn) * t[nn];
            CHECK(s == doctest::Approx(y[i] / pf.h).epsilon(1e-8));
          }
          // inverse-jacobian contraction: y_m y^m_n = (1/h) K^{2(1-h)} t_n
          const MetricData md = metric_data(pf, y);
          for (int nn = 0; nn < 3; ++nn) {
            double s = 0.0, tlow = 0.0;
            for (int m = 0; m < 3; ++m) {
              s += md.y_lower[m] * yinv(m, nn);
              tlow += pf.a(nn, m) * t[m];
            }
            const double want = std::pow(md.s.K, 2.0 * (1.0 - pf.h)) * tlow / pf.h;
            CHECK(s == doctest::Approx(want).epsilon(1e-8));
          }
        }
      }
}

TEST_CASE("second derivatives of the inverse from the relation") {
  const PointFrame pf = frame(CanonicalModel::FlatRotating, 3, 1.0, 1.0);
  Sampler smp(13);
  const Vec y = smp.y_admissible(pf);
  const Vec t = t_map(pf, y, scalar_pack<double>(pf, y));
  const Ten3 ysec = inverse_second(pf, y);
  // oracle: difference the inverse jacobian in t
  const double hstep = 1e-5;
  for (int l = 0; l < 3; ++l) {
    Vec tp = t, tm = t;
    tp[l] += hstep;
    tm[l] -= hstep;
    const Vec yp = inverse_map(pf, tp);
    const Vec ym = inverse_map(pf, tm);
    const Mat jp = inverse_jacobian(automorphism_eval(pf, yp).t_jac);
    const Mat jm = inverse_jacobian(automorphism_eval(pf, ym).t_jac);
    for (int nn = 0; nn < 3; ++nn)
      for (int m = 0; m < 3; ++m) {
        const double fd = (jp(nn, m) - jm(nn, m)) / (2.0 * hstep);
        CHECK(ysec(nn, m, l) == doctest::Approx(fd).epsilon(1e-5));
      }
  }
}

TEST_CASE("polar angle pieces and frame expansion") {
  Sampler smp(99);
  const PointFrame pf = frame(CanonicalModel::ConformalRotating, 3, 1.0, 1.2);
  for (int trial = 0; trial < 10; ++trial) {
    const Vec y = smp.y_admissible(pf);
    const AutomorphismEval ev = automorphism_eval(pf, y);
    const auto P = scalar_pack<double>(pf, y);
    CHECK(ev.sin_rho * ev.sin_rho + ev.cos_rho * ev.cos_rho == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::acos(std::clamp(ev.cos_rho, -1.0, 1.0)) == doctest::Approx(P.f).epsilon(1e-10));
    const MetricData md = metric_data(pf, y);
    const Vec tr = frame_reconstruct(pf, md, ev);
    for (int m = 0; m < 3; ++m) CHECK(tr[m] == doctest::Approx(ev.t[m]).epsilon(1e-9));
  }
  // zero charge: T1 = B, T2 = 0
  const PointFrame pf0 = frame(CanonicalModel::ConformalRotating, 3, 1.0, 0.0);
  const Vec y0 = Sampler(1).y_admissible(pf0);
  const AutomorphismEval e0 = automorphism_eval(pf0, y0);
  const auto P0 = scalar_pack<double>(pf0, y0);
  CHECK(e0.T1 == doctest::Approx(P0.B).epsilon(1e-12));
  CHECK(e0.T2 == doctest::Approx(0.0));
  // orthogonal-to-axis specialization
  {
    Vec p{0.0, 0.0, 1.0};
    double pb = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) pb += pf.a(i, j) * p[i] * pf.bt_up[j];
    for (int i = 0; i < 3; ++i) p[i] -= pb * pf.bt_up[i];
    const auto Pp = scalar_pack<double>(pf, p);
    const AutomorphismEval evp = automorphism_eval(pf, p);
    const double q = Pp.q;
    CHECK(evp.T1 == doctest::Approx(-(1.0 - pf.h) * q * q + Pp.B + 0.5 * pf.g * q * (pf.g * q))
                        .epsilon(1e-9));
    CHECK(evp.T2 == doctest::Approx(0.5 * pf.g * q * q).epsilon(1e-9));
  }
  // requires unit axis norm
  const PointFrame pfc = frame(CanonicalModel::ConformalRotating, 3, 0.8, 1.2);
  const Vec yc = Sampler(2).y_admissible(pfc);
  const MetricData mdc = metric_data(pfc, yc);
  const AutomorphismEval evc = automorphism_eval(pfc, yc);
  CHECK_THROWS_AS(frame_reconstruct(pfc, mdc, evc), DomainError);
}

TEST_CASE("inverse of degenerate input") {
  const PointFrame pf = frame(CanonicalModel::FlatConstant, 3, 1.0, 0.8);
  CHECK_THROWS_AS(inverse_map(pf, Vec{0.0, 0.0, 0.0}), ZeroVectorError);
}
