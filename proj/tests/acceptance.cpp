// Acceptance gate: every release-blocking property, each printed as one
// pass/fail line with its measured worst residual and pinned tolerance.
// Exit status is the number of failed criteria.

#include <cmath>
#include <cstdio>
#include <sstream>

#include "fsgeo/angle.hpp"
#include "fsgeo/automorphism.hpp"
#include "fsgeo/connection.hpp"
#include "fsgeo/curvature.hpp"
#include "fsgeo/indicatrix.hpp"
#include "fsgeo/sampling.hpp"
#include "fsgeo/suites.hpp"
#include "fsgeo/transport.hpp"

using namespace fsgeo;

namespace {

int failures = 0;

void report(int idx, const char* what, double worst, double tol) {
  const bool ok = worst <= tol;
  if (!ok) ++failures;
  std::printf("%s  criterion %2d: %-58s  max %.3e  tol %.0e\n", ok ? "PASS" : "FAIL", idx, what,
              worst, tol);
}

const std::vector<CanonicalModel> kModels{CanonicalModel::FlatConstant, CanonicalModel::FlatRotating,
                                          CanonicalModel::ConformalRotating,
                                          CanonicalModel::ConstantCurvature};

Vec orthogonalize(const PointFrame& pf, Vec p) {
  double pb = 0.0;
  const int n = static_cast<int>(p.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) pb += pf.a(i, j) * p[i] * pf.bt_up[j];
  for (int i = 0; i < n; ++i) p[i] -= pb * pf.bt_up[i];
  const double nn = std::sqrt(quad(pf.a, p, p));
  for (double& v : p) v /= nn;
  return p;
}

// 1. metric normalization at the axis poles
void criterion_1() {
  double worstK = 0.0, worstF = 0.0;
  for (auto which : kModels) {
    auto m = make_model(which, 3, 1.0, 1.2);
    Sampler smp(1);
    for (int i = 0; i < 10; ++i) {
      const Vec x = smp.x_box(3, -0.8, 0.8);
      const PointFrame pf = point_frame(*m, x);
      const Vec perp = orthogonalize(pf, smp.y_admissible(pf));
      Vec yp(3), ym(3);
      for (int a = 0; a < 3; ++a) {
        yp[a] = pf.b_up[a] + 1e-4 * perp[a];
        ym[a] = -pf.b_up[a] + 1e-4 * perp[a];
      }
      const auto Pp = scalar_pack<double>(pf, yp);
      const auto Pm = scalar_pack<double>(pf, ym);
      worstK = std::max(worstK, std::fabs(Pp.K - 1.0));
      worstF = std::max({worstF, std::fabs(Pp.f), std::fabs(Pm.f - M_PI)});
    }
  }
  report(1, "axis normalization K(b)=1", worstK, 1e-8);
  report(1, "polar angle at the poles (near-pole band)", worstF, 1e-3);
}

// 2. determinant ratio and cartan-vector norm
void criterion_2() {
  double worst = 0.0;
  for (auto which : kModels)
    for (double g : {0.0, 0.6, 1.2}) {
      auto m = make_model(which, 3, 1.0, g);
      Sampler smp(2);
      for (int i = 0; i < 200; ++i) {
        const Vec x = smp.x_box(3, -0.8, 0.8);
        const PointFrame pf = point_frame(*m, x);
        const Vec y = smp.y_admissible(pf);
        const MetricData md = metric_data(pf, y);
        const double want = std::pow(md.s.K * md.s.K / md.s.B, 3) * mat_det(pf.a);
        worst = std::max(worst, std::fabs(mat_det(md.g) / want - 1.0));
        double AA = 0.0;
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b)
            AA += md.ginv(a, b) * md.s.K * md.s.K * md.C_contr[a] * md.C_contr[b];
        worst = std::max(worst, std::fabs(AA - 9.0 * g * g / 4.0) / (1.0 + 9.0 * g * g / 4.0));
      }
    }
  report(2, "determinant ratio and cartan-vector norm", worst, 1e-8);
}

// 3. conformality of the map jacobian
void criterion_3() {
  double worst = 0.0;
  for (auto which : kModels) {
    auto m = make_model(which, 3, 1.0, 1.2);
    Sampler smp(3);
    for (int i = 0; i < 50; ++i) {
      const Vec x = smp.x_box(3, -0.8, 0.8);
      const PointFrame pf = point_frame(*m, x);
      const Vec y = smp.y_admissible(pf);
      const MetricData md = metric_data(pf, y);
      const AutomorphismEval ev = automorphism_eval(pf, y);
      const double scale = std::pow(md.s.K, 2.0 * (pf.h - 1.0));
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          double s = 0.0;
          for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) s += pf.a(a, b) * ev.t_jac(a, k) * ev.t_jac(b, l);
          worst = std::max(worst, std::fabs(s / (pf.h * pf.h) - scale * md.g(k, l)) /
                                      (1.0 + scale * max_abs(md.g)));
        }
    }
  }
  report(3, "jacobian conformality", worst, 1e-8);
}

// 4. constant indicatrix curvature
void criterion_4() {
  double worst_fit = 0.0, worst_spread = 0.0;
  for (double g : {0.6, 1.2}) {
    auto m = make_model(CanonicalModel::ConformalRotating, 3, 1.0, g);
    Sampler smp(4);
    std::vector<double> fits;
    for (int p = 0; p < 4; ++p) {
      const Vec x = smp.x_box(3, -0.8, 0.8);
      const PointFrame pf = point_frame(*m, x);
      std::vector<Vec> ys;
      for (int i = 0; i < 50; ++i) ys.push_back(smp.y_admissible(pf));
      const IndicatrixReport r = constant_curvature_check(*m, x, ys);
      worst_fit = std::max(worst_fit, std::fabs(r.fitted_C - g * g / 4.0));
      worst_spread = std::max(worst_spread, r.spread);
      fits.push_back(r.fitted_C);
    }
    for (double f : fits)
      for (double f2 : fits) worst_spread = std::max(worst_spread, std::fabs(f - f2));
  }
  report(4, "indicatrix constant curvature value", worst_fit, 1e-6);
  report(4, "indicatrix spread across directions and points", worst_spread, 1e-6);
}

// 5. connection route agreement
void criterion_5() {
  double worst = 0.0;
  for (auto which : kModels) {
    auto m = make_model(which, 3, 1.0, 0.9);
    Sampler smp(5);
    for (int i = 0; i < 100; ++i) {
      const Vec x = smp.x_box(3, -0.8, 0.8);
      const PointFrame pf = point_frame(*m, x);
      const Vec y = smp.y_admissible(pf);
      const Mat Na = n_coeffs_closed(pf, y);
      const Mat Nb = n_coeffs_assembled(pf, y);
      const Mat Nd = n_coeffs_transitivity(*m, x, y);
      const double sN = 1.0 + max_abs(Na);
      for (size_t k = 0; k < Na.raw().size(); ++k) {
        worst = std::max(worst, std::fabs(Na.raw()[k] - Nb.raw()[k]) / sN);
        worst = std::max(worst, std::fabs(Na.raw()[k] - Nd.raw()[k]) / sN);
      }
    }
  }
  report(5, "connection route agreement (closed vs transitivity)", worst, 1e-6);
}

// 6. metricity and transitivity residuals
void criterion_6() {
  double worst_an = 0.0, worst_fd = 0.0;
  for (auto which : kModels) {
    auto m = make_model(which, 3, 1.0, 0.8);
    Sampler smp(6);
    for (int i = 0; i < 25; ++i) {
      const Vec x = smp.x_box(3, -0.8, 0.8);
      const PointFrame pf = point_frame(*m, x);
      const Vec y = smp.y_admissible(pf);
      const auto r = covariant_suite(*m, x, y);
      worst_an = std::max({worst_an, r.dK, r.dy_lower, r.dg, r.dt, r.dt_jac, r.ddefo, r.dF_xform});
      worst_fd = std::max(worst_fd, r.dinv_jac);
    }
  }
  report(6, "metricity and transitivity (analytic grade)", worst_an, 1e-8);
  report(6, "metricity and transitivity (differenced grade)", worst_fd, 1e-6);
}

// 7. derivative-coefficient identities
void criterion_7() {
  double worst31 = 0.0, worst32 = 0.0, worst_sym = 0.0;
  for (auto which : kModels) {
    auto m = make_model(which, 3, 1.0, 1.1);
    Sampler smp(7);
    for (int i = 0; i < 25; ++i) {
      const Vec x = smp.x_box(3, -0.8, 0.8);
      const PointFrame pf = point_frame(*m, x);
      const Vec y = smp.y_admissible(pf);
      const ConnectionData cd = connection_data(pf, y);
      const MetricData md = metric_data(pf, y);
      Ten4 low(3);
      for (int k = 0; k < 3; ++k)
        for (int mm = 0; mm < 3; ++mm)
          for (int nn = 0; nn < 3; ++nn)
            for (int j = 0; j < 3; ++j) {
              double s = 0.0;
              for (int h = 0; h < 3; ++h) s += md.g(k, h) * cd.N3(h, mm, nn, j);
              low(k, mm, nn, j) = s;
            }
      const double ls = 1.0 + max_abs(low);
      for (int mm = 0; mm < 3; ++mm)
        for (int nn = 0; nn < 3; ++nn)
          for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += md.y_lower[k] * cd.N3(k, mm, nn, j);
            worst31 = std::max(worst31, std::fabs(s) / ls);
            for (int k = 0; k < 3; ++k)
              worst_sym = std::max({worst_sym, std::fabs(low(k, mm, nn, j) - low(nn, mm, k, j)) / ls,
                                    std::fabs(low(k, mm, nn, j) - low(j, mm, nn, k)) / ls});
          }
      worst32 = std::max(worst32, covariant_suite(*m, x, y).prop32);
    }
  }
  report(7, "transversality of third coefficients", worst31, 1e-6);
  report(7, "third coefficients equal cartan derivative", worst32, 1e-6);
  report(7, "total symmetry of lowered third coefficients", worst_sym, 1e-6);
}

// 8. angle preservation, pointwise and along transport
void criterion_8() {
  double worst_eq = 0.0;
  for (auto which : kModels) {
    auto m = make_model(which, 3, 1.0, 1.0);
    Sampler smp(8);
    for (int i = 0; i < 100; ++i) {
      const Vec x = smp.x_box(3, -0.8, 0.8);
      const PointFrame pf = point_frame(*m, x);
      const Vec y1 = smp.y_admissible(pf);
      const Vec y2 = smp.y_admissible(pf);
      worst_eq = std::max(worst_eq, angle_equation_residual(pf, y1, y2));
    }
  }
  report(8, "angle preservation equation residual", worst_eq, 1e-6);

  double worst_order = 0.0, worst_drift = 0.0;
  for (auto which : {CanonicalModel::FlatRotating, CanonicalModel::ConformalRotating,
                     CanonicalModel::ConstantCurvature}) {
    auto m = make_model(which, 3, 1.0, 1.0);
    const CurvePath loop = circle_path({0.13, 0.06, -0.01}, 0.5, 0, 1);
    const PointFrame pf0 = point_frame(*m, loop.x(0.0));
    Sampler smp(88);
    const std::vector<Vec> y0s{smp.y_admissible(pf0), smp.y_admissible(pf0)};
    Vec ad;
    for (int steps : {128, 256, 512}) ad.push_back(transport(*m, loop, y0s, steps).alpha_drift);
    if (ad[0] > 1e-12)
      for (int i = 0; i + 1 < 3; ++i)
        worst_order = std::max(worst_order, 3.5 - std::log2(ad[i] / ad[i + 1]));
    worst_drift = std::max(worst_drift, transport(*m, loop, y0s, 1024).alpha_drift);
  }
  report(8, "transport order deficit (observed vs 3.5)", worst_order, 0.0 + 1e-9);
  report(8, "angle drift at 1024 steps", worst_drift, 1e-8);
}

// 9. curvature identity bundle
void criterion_9() {
  double routes = 0.0, skews = 0.0, contr = 0.0, sq = 0.0, cyc = 0.0, dT = 0.0;
  for (auto which : kModels) {
    auto m = make_model(which, 3, 1.0, 0.8);
    Sampler smp(9);
    for (int i = 0; i < 25; ++i) {
      const Vec x = smp.x_box(3, -0.6, 0.6);
      const PointFrame pf = point_frame(*m, x);
      const Vec y = smp.y_admissible(pf);
      const CurvatureResiduals r = curvature_residuals(*m, x, y);
      routes = std::max({routes, r.m_routes, r.e_routes_def, r.e_routes_trans, r.rho_routes_def,
                         r.rho_routes_T, r.m_closed, r.m_sq_closed});
      skews = std::max(skews, r.rho_skew);
      contr = std::max({contr, r.m_contraction, r.e_contr_yk, r.e_contr_yn});
      sq = std::max(sq, r.rho_sq);
      cyc = std::max({cyc, r.cyclic_m, r.cyclic_rho});
      dT = std::max(dT, r.dT);
    }
  }
  report(9, "curvature route agreement", routes, 1e-6);
  report(9, "curvature skew symmetries", skews, 1e-8);
  report(9, "curvature contractions", contr, 1e-7);
  report(9, "squared-norm relation", sq, 1e-6);
  report(9, "cyclic identities", cyc, 1e-7);
  report(9, "kernel covariant constancy", dT, 1e-7);
}

// 10. everything collapses to the background at zero charge
void criterion_10() {
  double worst = 0.0;
  for (auto which : kModels) {
    auto m = make_model(which, 3, 1.0, 0.0);
    Sampler smp(10);
    for (int i = 0; i < 25; ++i) {
      const Vec x = smp.x_box(3, -0.8, 0.8);
      const PointFrame pf = point_frame(*m, x);
      const Vec y = smp.y_admissible(pf);
      const Vec t = t_map(pf, y, scalar_pack<double>(pf, y));
      for (int a = 0; a < 3; ++a) worst = std::max(worst, std::fabs(t[a] - y[a]) / (1.0 + max_abs(y)));
      const Mat N = n_coeffs_closed(pf, y);
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          double want = 0.0;
          for (int h = 0; h < 3; ++h) want -= pf.gamma(a, b, h) * y[h];
          worst = std::max(worst, std::fabs(N(a, b) - want) / (1.0 + max_abs(N)));
        }
      const Ten4 riem = riemann(*m, x);
      const Ten4 rho = rho_closed(pf, riem, y);
      for (size_t k = 0; k < rho.raw().size(); ++k)
        worst = std::max(worst, std::fabs(rho.raw()[k] - riem.raw()[k]) / (1.0 + max_abs(riem)));
      const Vec y2 = smp.y_admissible(pf);
      worst = std::max(worst, std::fabs(two_vector_angle(pf, y, y2).alpha -
                                        riemannian_angle(pf.a, y, y2)));
    }
  }
  report(10, "background limit at zero charge", worst, 1e-9);
}

// 11. byte-identical reports for identical config and seed
void criterion_11() {
  SuiteConfig cfg;
  cfg.model_id = "iii";
  cfg.samples = 10;
  cfg.seed = 1234;
  std::ostringstream a, b;
  write_json(run_suites(cfg), a);
  write_json(run_suites(cfg), b);
  const bool same = a.str() == b.str() && !a.str().empty();
  report(11, "deterministic byte-identical reports", same ? 0.0 : 1.0, 0.5);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  std::printf("%s\n", failures == 0 ? "acceptance: all criteria passed"
                                    : "acceptance: FAILURES PRESENT");
  return failures;
}
