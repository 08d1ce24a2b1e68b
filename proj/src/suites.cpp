#include "fsgeo/suites.hpp"

#include <algorithm>
#include <cmath>

#include "fsgeo/angle.hpp"
#include "fsgeo/automorphism.hpp"
#include "fsgeo/connection.hpp"
#include "fsgeo/curvature.hpp"
#include "fsgeo/indicatrix.hpp"
#include "fsgeo/sampling.hpp"
#include "fsgeo/transport.hpp"

namespace fsgeo {

namespace {

struct SampleSet {
  std::shared_ptr<BackgroundModel> model;
  std::vector<Vec> xs;
  std::vector<PointFrame> frames;
  std::vector<Vec> ys, y2s;
};

SampleSet draw_samples(const SuiteConfig& cfg) {
  SampleSet s;
  s.model = make_model(canonical_from_string(cfg.model_id), cfg.dim, cfg.c, cfg.g, cfg.knobs);
  Sampler smp(cfg.seed);
  for (int i = 0; i < cfg.samples; ++i) {
    const Vec x = smp.x_box(cfg.dim, cfg.x_lo, cfg.x_hi);
    PointFrame pf = point_frame(*s.model, x);
    s.ys.push_back(smp.y_admissible(pf));
    s.y2s.push_back(smp.y_admissible(pf));
    s.xs.push_back(x);
    s.frames.push_back(std::move(pf));
  }
  return s;
}

double rel(double diff, double scale) { return std::fabs(diff) / (1.0 + std::fabs(scale)); }

// ---------------------------------------------------------------------------

void suite_metric(const SuiteConfig& cfg, const SampleSet& S, ResidualReport& rep) {
  const int n = cfg.dim;
  const bool unit_axis = cfg.c == 1.0;
  CheckAcc norm("metric", "axis-normalization", "analytic", cfg.tol_analytic);
  CheckAcc pole_f("metric", "axis-polar-angle", "analytic", 1e-3);
  CheckAcc det("metric", "det-ratio", "analytic", cfg.tol_analytic);
  CheckAcc cnorm("metric", "cartan-norm", "analytic", cfg.tol_analytic);
  CheckAcc scal("metric", "scalar-identities", "analytic", 1e-9);
  CheckAcc tens("metric", "tensor-identities", "analytic", 1e-9);
  CheckAcc frame("metric", "frame-vector", "analytic", 1e-8);
  CheckAcc proj("metric", "projector", "analytic", 1e-9);
  CheckAcc homog("metric", "homogeneity", "analytic", 1e-10);
  CheckAcc bg("metric", "background-compat", "analytic", 1e-10);

  for (int i = 0; i < cfg.samples; ++i) {
    const PointFrame& pf = S.frames[i];
    const Vec& x = S.xs[i];
    const Vec& y = S.ys[i];
    const MetricData md = metric_data(pf, y);
    const FinsleroidEval& e = md.s;

    if (unit_axis) {
      // approach the poles along a shrinking transversal ray
      Vec perp = S.y2s[i];
      double pb = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) pb += pf.a(a, b) * perp[a] * pf.bt_up[b];
      for (int a = 0; a < n; ++a) perp[a] -= pb * pf.bt_up[a];
      const double pn = std::sqrt(quad(pf.a, perp, perp));
      for (int a = 0; a < n; ++a) perp[a] /= pn;
      Vec yp(n), ym(n);
      for (int a = 0; a < n; ++a) {
        yp[a] = pf.b_up[a] + 1e-4 * perp[a];
        ym[a] = -pf.b_up[a] + 1e-4 * perp[a];
      }
      const auto Pp = scalar_pack<double>(pf, yp);
      const auto Pm = scalar_pack<double>(pf, ym);
      norm.update(std::fabs(Pp.K - 1.0), x, yp);
      pole_f.update(std::fabs(Pp.f), x, yp);
      pole_f.update(std::fabs(Pm.f - M_PI), x, ym);
    }

    if (unit_axis)
      det.update(std::fabs(mat_det(md.g) / (std::pow(e.K * e.K / e.B, n) * mat_det(pf.a)) - 1.0), x,
                 y);
    double AA = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) AA += md.ginv(a, b) * e.K * e.K * md.C_contr[a] * md.C_contr[b];
    cnorm.update(rel(AA - n * n * cfg.g * cfg.g / 4.0, n * n * cfg.g * cfg.g / 4.0), x, y);

    scal.update(rel(e.L * e.L + e.h * e.h * e.b * e.b - e.B, e.B), x, y);
    scal.update(rel(e.B - e.h * e.h * e.qt * e.qt - e.A * e.A, e.B), x, y);
    scal.update(std::fabs(e.f - std::acos(e.A / std::sqrt(e.B))), x, y);

    tens.update(rel(quad(md.g, y, y) - e.K * e.K, e.K * e.K), x, y);
    const Vec gy = mat_vec(md.g, y);
    for (int a = 0; a < n; ++a) tens.update(rel(md.y_lower[a] - gy[a], e.K), x, y);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double cy = 0.0, gg = 0.0;
        for (int k = 0; k < n; ++k) {
          cy += md.C_low(a, b, k) * y[k];
          gg += md.g(a, k) * md.ginv(k, b);
        }
        tens.update(rel(cy, max_abs(md.C_low)), x, y);
        tens.update(std::fabs(gg - (a == b ? 1.0 : 0.0)), x, y);
      }

    double mm = 0.0, ml = 0.0;
    for (int a = 0; a < n; ++a) {
      ml += md.m_upper[a] * md.l_lower[a];
      for (int b = 0; b < n; ++b) mm += md.g(a, b) * md.m_upper[a] * md.m_upper[b];
    }
    frame.update(std::fabs(mm - 1.0), x, y);
    frame.update(std::fabs(ml), x, y);
    if (cfg.g != 0.0) {
      double cc = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) cc += md.ginv(a, b) * md.C_contr[a] * md.C_contr[b];
      for (int k = 0; k < n; ++k) {
        double cu = 0.0;
        for (int a = 0; a < n; ++a) cu += md.ginv(k, a) * md.C_contr[a];
        const double want = (cfg.g > 0 ? 1.0 : -1.0) * cu / std::sqrt(cc);
        frame.update(std::fabs(md.m_upper[k] - want), x, y);
      }
    }
    if (unit_axis)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          proj.update(rel(md.Hproj(a, b) - e.B / (e.K * e.K) * md.eta(a, b), max_abs(md.Hproj)), x, y);

    if (i % 16 == 0)
      for (double k : {0.5, 2.0, 7.0}) {
        const auto hr = homogeneity_check(pf, y, k);
        homog.update(std::max({hr.K, hr.y_lower, hr.g, hr.cartan, hr.euler}), x, y);
      }

    // background side: nabla a = 0 and the axis norm constraint
    const Mat nb = nabla_oneform(*S.model, x);
    const Vec bu = mat_vec(pf.ainv, pf.b_low);
    bg.update(std::fabs(quad(pf.ainv, pf.b_low, pf.b_low) - cfg.c * cfg.c), x, y);
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int m = 0; m < n; ++m) s += bu[m] * nb(k, m);
      bg.update(std::fabs(s), x, y);
    }
  }
  if (unit_axis) {
    rep.rows.push_back(norm.row());
    rep.rows.push_back(pole_f.row());
    rep.rows.push_back(det.row());
  }
  rep.rows.push_back(cnorm.row());
  rep.rows.push_back(scal.row());
  rep.rows.push_back(tens.row());
  rep.rows.push_back(frame.row());
  if (unit_axis) rep.rows.push_back(proj.row());
  rep.rows.push_back(homog.row());
  rep.rows.push_back(bg.row());
}

void suite_automorphism(const SuiteConfig& cfg, const SampleSet& S, ResidualReport& rep) {
  const int n = cfg.dim;
  const bool unit_axis = cfg.c == 1.0;
  CheckAcc transit("automorphism", "norm-transit", "analytic", 1e-9);
  CheckAcc homog("automorphism", "homogeneity", "analytic", 1e-9);
  CheckAcc euler("automorphism", "euler", "analytic", 1e-9);
  CheckAcc conf("automorphism", "jacobian-conformality", "analytic", cfg.tol_analytic);
  CheckAcc defo("automorphism", "deformation", "analytic", cfg.tol_analytic);
  CheckAcc pair("automorphism", "pair-identities", "analytic", 1e-7);
  CheckAcc inv("automorphism", "inverse-roundtrip", "analytic", 1e-10);
  CheckAcc invh("automorphism", "inverse-homogeneity", "analytic", 1e-8);
  CheckAcc unit("automorphism", "unit-correspondence", "analytic", 1e-9);
  CheckAcc polar("automorphism", "polar-pieces", "analytic", 1e-10);
  CheckAcc framex("automorphism", "frame-expansion", "analytic", 1e-9);

  for (int i = 0; i < cfg.samples; ++i) {
    const PointFrame& pf = S.frames[i];
    const Vec& x = S.xs[i];
    const Vec& y = S.ys[i];
    const MetricData md = metric_data(pf, y);
    const AutomorphismEval ev = automorphism_eval(pf, y);
    const double K = md.s.K, h = pf.h;

    transit.update(rel(ev.S - std::pow(K, h), ev.S), x, y);
    Vec ky = y;
    for (double& v : ky) v *= 1.7;
    const Vec tk = t_map(pf, ky, scalar_pack<double>(pf, ky));
    for (int m = 0; m < n; ++m)
      homog.update(rel(tk[m] - std::pow(1.7, h) * ev.t[m], max_abs(ev.t)), x, y);
    for (int m = 0; m < n; ++m) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += ev.t_jac(m, k) * y[k];
      euler.update(rel(s - h * ev.t[m], max_abs(ev.t)), x, y);
    }
    const double scale = std::pow(K, 2.0 * (h - 1.0));
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        double s = 0.0, d = 0.0;
        for (int m = 0; m < n; ++m)
          for (int nn = 0; nn < n; ++nn) {
            s += pf.a(m, nn) * ev.t_jac(m, k) * ev.t_jac(nn, l);
            d += pf.a(m, nn) * ev.defo(m, k) * ev.defo(nn, l);
          }
        conf.update(rel(s / (h * h) - scale * md.g(k, l), scale * max_abs(md.g)), x, y);
        defo.update(rel(d - md.g(k, l), max_abs(md.g)), x, y);
      }
    for (int m = 0; m < n; ++m) {
      double s = 0.0;
      for (int nn = 0; nn < n; ++nn) s += ev.defo(m, nn) * y[nn];
      defo.update(rel(s - std::pow(K, 1.0 - h) * ev.t[m], max_abs(ev.t)), x, y);
    }

    // pair identities through second jets
    {
      const auto yj = lift(y, 2);
      const auto tj = t_map(pf, yj, scalar_pack<Jet>(pf, yj));
      const double p2 = ev.p * ev.p;
      Mat ang(n);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) ang(a, b) = md.g(a, b) - md.l_lower[a] * md.l_lower[b];
      for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k) {
          double s = 0.0;
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) s += p2 * tj[a].d2(m, k) * ev.t[b] * pf.a(a, b);
          const double want = (1.0 / h - 1.0) * (ang(k, m) - md.l_lower[k] * md.l_lower[m]);
          pair.update(rel(s - want, max_abs(md.g)), x, y);
        }
      const double sc = h * (1.0 - h) * std::pow(K, 2.0 * (h - 1.0));
      for (int nn = 0; nn < n; ++nn)
        for (int a = 0; a < n; ++a) {
          double s = 0.0;
          for (int hh = 0; hh < n; ++hh) {
            double tl = 0.0;
            for (int r = 0; r < n; ++r) tl += pf.a(hh, r) * ev.t[r];
            s += tl * tj[hh].d2(nn, a);
          }
          pair.update(rel(s - sc * (md.g(nn, a) - 2.0 * md.l_lower[nn] * md.l_lower[a]),
                          std::fabs(sc) * max_abs(md.g) + 1.0),
                      x, y);
        }
      const Mat yinv = inverse_jacobian(ev.t_jac);
      for (int nn = 0; nn < n; ++nn) {
        double s15 = 0.0, s16 = 0.0, tl = 0.0;
        for (int m = 0; m < n; ++m) {
          s15 += md.y_lower[m] * yinv(m, nn);
          tl += pf.a(nn, m) * ev.t[m];
        }
        for (int hh = 0; hh < n; ++hh) {
          double tlow = 0.0;
          for (int r = 0; r < n; ++r) tlow += pf.a(hh, r) * ev.t[r];
          s16 += tlow * ev.t_jac(hh, nn);
        }
        pair.update(rel(s15 - std::pow(K, 2.0 * (1.0 - h)) * tl / h, std::fabs(s15)), x, y);
        pair.update(rel(s16 - h * std::pow(K, 2.0 * (h - 1.0)) * md.y_lower[nn], std::fabs(s16)), x, y);
      }
    }

    const Vec yb = inverse_map(pf, ev.t);
    for (int a = 0; a < n; ++a) inv.update(rel(yb[a] - y[a], max_abs(y)), x, y);
    Vec kt = ev.t;
    for (double& v : kt) v *= 3.1;
    const Vec ykt = inverse_map(pf, kt);
    for (int a = 0; a < n; ++a)
      invh.update(rel(ykt[a] - std::pow(3.1, 1.0 / h) * y[a], max_abs(y)), x, y);

    Vec yu = y;
    for (double& v : yu) v /= K;
    const Vec tu = t_map(pf, yu, scalar_pack<double>(pf, yu));
    unit.update(std::fabs(std::sqrt(quad(pf.a, tu, tu)) - 1.0), x, y);

    polar.update(std::fabs(ev.sin_rho * ev.sin_rho + ev.cos_rho * ev.cos_rho - 1.0), x, y);
    polar.update(std::fabs(std::acos(std::clamp(ev.cos_rho, -1.0, 1.0)) - md.s.f), x, y);
    {
      // conformal-multiplier scalar recovered from the polar pieces
      double bstar = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) bstar += pf.a(a, b) * ev.t[a] * pf.bt_up[b];
      const double S2 = ev.S * ev.S;
      const double mu = ev.sin_rho * ev.sin_rho * h * h * S2 / (S2 - bstar * bstar);
      polar.update(rel(mu - h * h, h * h), x, y);
    }
    if (unit_axis) {
      const Vec tr = frame_reconstruct(pf, md, ev);
      for (int m = 0; m < n; ++m) framex.update(rel(tr[m] - ev.t[m], max_abs(ev.t)), x, y);
    }
  }
  rep.rows.push_back(transit.row());
  rep.rows.push_back(homog.row());
  rep.rows.push_back(euler.row());
  rep.rows.push_back(conf.row());
  rep.rows.push_back(defo.row());
  rep.rows.push_back(pair.row());
  rep.rows.push_back(inv.row());
  rep.rows.push_back(invh.row());
  rep.rows.push_back(unit.row());
  rep.rows.push_back(polar.row());
  if (unit_axis) rep.rows.push_back(framex.row());
}

void suite_connection(const SuiteConfig& cfg, const SampleSet& S, ResidualReport& rep) {
  const int n = cfg.dim;
  const bool unit_axis = cfg.c == 1.0;
  CheckAcc route_an("connection", "route-agreement-analytic", "analytic", cfg.tol_analytic);
  CheckAcc route_fd("connection", "route-agreement-transitivity", "fd", cfg.tol_fd);
  CheckAcc forms("connection", "form-agreement", "analytic", 1e-9);
  CheckAcc deuler("connection", "derivative-euler", "analytic", 1e-9);
  CheckAcc homog("connection", "homogeneity", "analytic", 1e-9);
  CheckAcc contr("connection", "contractions", "analytic", 1e-7);
  CheckAcc orth("connection", "orthogonality", "analytic", 1e-8);
  CheckAcc metr("connection", "metricity", "analytic", cfg.tol_analytic);
  CheckAcc trans("connection", "transitivity", "analytic", cfg.tol_analytic);
  CheckAcc invjac("connection", "inverse-jacobian-transport", "fd", cfg.tol_fd);
  CheckAcc p31("connection", "three-index-transversality", "analytic", cfg.tol_fd);
  CheckAcc p32("connection", "cartan-derivative-match", "analytic", cfg.tol_fd);
  CheckAcc sym3("connection", "three-index-symmetry", "analytic", cfg.tol_fd);
  CheckAcc angeq("connection", "angle-equation", "analytic", cfg.tol_fd);

  for (int i = 0; i < cfg.samples; ++i) {
    const PointFrame& pf = S.frames[i];
    const Vec& x = S.xs[i];
    const Vec& y = S.ys[i];
    const Mat Na = n_coeffs_closed(pf, y);
    const double sN = max_abs(Na);
    const Mat Nc = n_coeffs_from_tmap(pf, y);
    for (size_t k = 0; k < Na.raw().size(); ++k)
      route_an.update(rel(Na.raw()[k] - Nc.raw()[k], sN), x, y);
    if (i % 4 == 0) {
      const Mat Nd = n_coeffs_transitivity(*S.model, x, y);
      for (size_t k = 0; k < Na.raw().size(); ++k)
        route_fd.update(rel(Na.raw()[k] - Nd.raw()[k], sN), x, y);
    }
    if (unit_axis) {
      const Mat Nb = n_coeffs_assembled(pf, y);
      for (size_t k = 0; k < Na.raw().size(); ++k)
        forms.update(rel(Na.raw()[k] - Nb.raw()[k], sN), x, y);
    }
    const ConnectionData cd = connection_data(pf, y);
    for (int k = 0; k < n; ++k)
      for (int a = 0; a < n; ++a) {
        double s = 0.0;
        for (int m = 0; m < n; ++m) s += cd.D(k, a, m) * y[m];
        deuler.update(rel(s + cd.N(k, a), sN), x, y);
      }
    if (i % 16 == 0)
      for (double k : {0.5, 3.0}) {
        const auto hr = connection_homogeneity(pf, y, k);
        homog.update(std::max(hr.N, hr.D), x, y);
      }
    if (unit_axis) {
      const auto cr = connection_contractions(pf, y);
      contr.update(std::max({cr.uN, cr.bN, cr.d_b, cr.d_B, cr.lN}), x, y);
      orth.update(cr.orth, x, y);
    }
    const auto cov = covariant_suite(*S.model, x, y);
    metr.update(std::max({cov.dK, cov.dy_lower, cov.dg}), x, y);
    trans.update(std::max({cov.dt, cov.dt_jac, cov.ddefo, cov.dF_xform}), x, y);
    invjac.update(cov.dinv_jac, x, y);
    p32.update(cov.prop32, x, y);

    const MetricData md = metric_data(pf, y);
    Ten4 low(n);
    for (int k = 0; k < n; ++k)
      for (int mm = 0; mm < n; ++mm)
        for (int nn = 0; nn < n; ++nn)
          for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int h = 0; h < n; ++h) s += md.g(k, h) * cd.N3(h, mm, nn, j);
            low(k, mm, nn, j) = s;
          }
    const double ls = 1.0 + max_abs(low);
    for (int mm = 0; mm < n; ++mm)
      for (int nn = 0; nn < n; ++nn)
        for (int j = 0; j < n; ++j) {
          double s = 0.0;
          for (int k = 0; k < n; ++k) s += md.y_lower[k] * cd.N3(k, mm, nn, j);
          p31.update(std::fabs(s) / ls, x, y);
          for (int k = 0; k < n; ++k) {
            sym3.update(std::fabs(low(k, mm, nn, j) - low(nn, mm, k, j)) / ls, x, y);
            sym3.update(std::fabs(low(k, mm, nn, j) - low(j, mm, nn, k)) / ls, x, y);
          }
        }

    angeq.update(angle_equation_residual(pf, y, S.y2s[i]), x, y);
  }
  rep.rows.push_back(route_an.row());
  rep.rows.push_back(route_fd.row());
  if (unit_axis) rep.rows.push_back(forms.row());
  rep.rows.push_back(deuler.row());
  rep.rows.push_back(homog.row());
  if (unit_axis) {
    rep.rows.push_back(contr.row());
    rep.rows.push_back(orth.row());
  }
  rep.rows.push_back(metr.row());
  rep.rows.push_back(trans.row());
  rep.rows.push_back(invjac.row());
  rep.rows.push_back(p31.row());
  rep.rows.push_back(p32.row());
  rep.rows.push_back(sym3.row());
  rep.rows.push_back(angeq.row());
}

void suite_angle(const SuiteConfig& cfg, const SampleSet& S, ResidualReport& rep) {
  const int n = cfg.dim;
  const bool unit_axis = cfg.c == 1.0;
  CheckAcc basics("angle", "basics", "analytic", 1e-10);
  CheckAcc range("angle", "cosine-range", "analytic", 1e-12);
  CheckAcc routes("angle", "cosine-derivative-routes", "analytic", cfg.tol_analytic);
  CheckAcc contr("angle", "cosine-derivative-contractions", "analytic", cfg.tol_analytic);
  CheckAcc dg("angle", "charge-derivative", "fd", 1e-5);
  CheckAcc dgz("angle", "charge-derivative-forms", "analytic", cfg.tol_analytic);
  CheckAcc preserve("angle", "preservation", "analytic", cfg.tol_fd);

  for (int i = 0; i < cfg.samples; ++i) {
    const PointFrame& pf = S.frames[i];
    const Vec& x = S.xs[i];
    const Vec& y1 = S.ys[i];
    const Vec& y2 = S.y2s[i];
    const AngleData ad = two_vector_angle(pf, y1, y2);
    const AngleData ba = two_vector_angle(pf, y2, y1);
    basics.update(std::fabs(ad.lambda - ba.lambda), x, y1);
    basics.update(std::fabs(ad.alpha - riemannian_angle(pf.a, ad.t1, ad.t2) / pf.h), x, y1);
    Vec ky = y1;
    for (double& v : ky) v *= 2.0;
    basics.update(std::fabs(two_vector_angle(pf, y1, ky).lambda - 1.0), x, y1);
    // raw cosine scalar, before clamping
    const double raw = quad(pf.a, ad.t1, ad.t2) / (ad.S1 * ad.S2);
    range.update(std::max(raw - 1.0, -1.0 - raw), x, y1);

    const LambdaDerivs jets = dlambda_dy_jets(pf, y1, y2);
    const LambdaDerivs gen = dlambda_dy_generic(pf, y1, y2);
    const double sd = max_abs(jets.dy1) + max_abs(jets.dy2);
    for (int k = 0; k < n; ++k) {
      routes.update(rel(gen.dy1[k] - jets.dy1[k], sd), x, y1);
      routes.update(rel(gen.dy2[k] - jets.dy2[k], sd), x, y1);
    }
    if (unit_axis) {
      const LambdaDerivs closed = dlambda_dy_closed(pf, y1, y2);
      for (int k = 0; k < n; ++k) {
        routes.update(rel(closed.dy1[k] - jets.dy1[k], sd), x, y1);
        routes.update(rel(closed.dy2[k] - jets.dy2[k], sd), x, y1);
      }
      double c1 = 0.0, bc = 0.0;
      for (int k = 0; k < n; ++k) {
        c1 += y1[k] * closed.dy1[k];
        bc += pf.b_up[k] * closed.dy1[k];
      }
      const auto P1 = scalar_pack<double>(pf, y1);
      const auto P2 = scalar_pack<double>(pf, y2);
      const double want = pf.h * pf.h * (P1.q * P1.q * P2.A - ad.v12 * P1.A) /
                          (P1.B * std::sqrt(P1.B) * std::sqrt(P2.B));
      contr.update(std::fabs(c1), x, y1);
      contr.update(rel(bc - want, want), x, y1);
      contr.update(std::fabs(ad.sigma1 - (0.5 * pf.g * P1.A + pf.h * pf.h * P1.q)), x, y1);
      if (i % 8 == 0) {
        const DLambdaDg d = dlambda_dg(*S.model, x, y1, y2);
        dg.update(rel(d.fd - d.sigma_form, d.sigma_form), x, y1);
        if (cfg.g != 0.0) dgz.update(rel(d.z_form - d.sigma_form, d.sigma_form), x, y1);
      }
    }
    preserve.update(angle_equation_residual(pf, y1, y2), x, y1);
  }
  rep.rows.push_back(basics.row());
  rep.rows.push_back(range.row());
  rep.rows.push_back(routes.row());
  if (unit_axis) {
    rep.rows.push_back(contr.row());
    rep.rows.push_back(dg.row());
    if (cfg.g != 0.0) rep.rows.push_back(dgz.row());
  }
  rep.rows.push_back(preserve.row());
}

void suite_curvature(const SuiteConfig& cfg, const SampleSet& S, ResidualReport& rep) {
  CheckAcc routes_fd("curvature", "route-agreement", "fd", cfg.tol_fd);
  CheckAcc routes_an("curvature", "route-agreement-analytic", "analytic", cfg.tol_fd);
  CheckAcc closed("curvature", "axis-closed-forms", "analytic", cfg.tol_fd);
  CheckAcc contr("curvature", "contractions", "analytic", 1e-7);
  CheckAcc skew("curvature", "skew-symmetry", "analytic", cfg.tol_analytic);
  CheckAcc sq("curvature", "squared-norm", "analytic", cfg.tol_fd);
  CheckAcc raise("curvature", "raising-consistency", "analytic", cfg.tol_analytic);
  CheckAcc comm("curvature", "commutator", "fd", 1e-5);
  CheckAcc transd("curvature", "derivative-transitivity", "fd", cfg.tol_fd);
  CheckAcc cyc("curvature", "cyclic-identities", "analytic", 1e-7);
  CheckAcc dT("curvature", "kernel-transport", "fd", 1e-7);

  const int stride = std::max(1, cfg.samples / 25);  // the heavy block
  for (int i = 0; i < cfg.samples; i += stride) {
    const Vec& x = S.xs[i];
    const Vec& y = S.ys[i];
    const CurvatureResiduals r = curvature_residuals(*S.model, x, y);
    routes_fd.update(std::max({r.m_routes, r.e_routes_def, r.rho_routes_def}), x, y);
    routes_an.update(std::max({r.e_routes_trans, r.rho_routes_T}), x, y);
    if (cfg.c == 1.0) closed.update(std::max(r.m_closed, r.m_sq_closed), x, y);
    contr.update(std::max({r.m_contraction, r.e_contr_yk, r.e_contr_yn, r.e_sym}), x, y);
    skew.update(r.rho_skew, x, y);
    sq.update(r.rho_sq, x, y);
    raise.update(r.raise_consistency, x, y);
    comm.update(r.commutator, x, y);
    transd.update(r.transit_deriv, x, y);
    cyc.update(std::max(r.cyclic_m, r.cyclic_rho), x, y);
    dT.update(r.dT, x, y);
  }
  rep.rows.push_back(routes_fd.row());
  rep.rows.push_back(routes_an.row());
  if (cfg.c == 1.0) rep.rows.push_back(closed.row());
  rep.rows.push_back(contr.row());
  rep.rows.push_back(skew.row());
  rep.rows.push_back(sq.row());
  rep.rows.push_back(raise.row());
  rep.rows.push_back(comm.row());
  rep.rows.push_back(transd.row());
  rep.rows.push_back(cyc.row());
  rep.rows.push_back(dT.row());
}

void suite_transport(const SuiteConfig& cfg, const SampleSet& S, ResidualReport& rep) {
  const int n = cfg.dim;
  // off center, so field symmetries cannot cancel the drift being measured
  Vec center(n, 0.0);
  for (int i = 0; i < n; ++i) center[i] = 0.13 - 0.07 * i;
  const CurvePath loop = circle_path(center, 0.5, 0, 1);
  const PointFrame pf0 = point_frame(*S.model, loop.x(0.0));
  Sampler smp(cfg.seed + 1);
  std::vector<Vec> y0s{smp.y_admissible(pf0), smp.y_admissible(pf0)};

  CheckAcc order("transport", "convergence-order", "fd", 0.5);  // order deficit vs 3.5
  CheckAcc drift("transport", "preservation", "fd", 1e-8);
  CheckAcc transit("transport", "transitivity-drift", "fd", 1e-8);
  CheckAcc holo("transport", "holonomy-angle", "fd", 1e-8);

  Vec ad, kd, td;
  for (int steps : {128, 256, 512}) {
    const TransportRun run = transport(*S.model, loop, y0s, steps);
    ad.push_back(run.alpha_drift);
    kd.push_back(run.K_drift);
    td.push_back(run.transitivity_drift);
  }
  // order is only measurable above the rounding floor of the drift itself
  const bool a_meas = ad[0] > 1e-12, k_meas = kd[0] > 1e-12;
  if (a_meas || k_meas) {
    for (int i = 0; i + 1 < 3; ++i) {
      if (a_meas) order.update(std::max(0.0, 3.5 - std::log2(ad[i] / ad[i + 1])), loop.x(0.0), y0s[0]);
      if (k_meas) order.update(std::max(0.0, 3.5 - std::log2(kd[i] / kd[i + 1])), loop.x(0.0), y0s[0]);
    }
  } else {
    order.update(0.0, loop.x(0.0), y0s[0]);
  }
  const TransportRun fine = transport(*S.model, loop, y0s, 1024);
  drift.update(std::max(fine.alpha_drift, fine.K_drift), loop.x(0.0), y0s[0]);
  transit.update(fine.transitivity_drift, loop.x(0.0), y0s[0]);
  const HolonomyReport hr = holonomy_report(*S.model, loop, y0s, 1024);
  holo.update(std::max(hr.alpha_delta, hr.K_delta), loop.x(0.0), y0s[0]);

  rep.rows.push_back(order.row());
  rep.rows.push_back(drift.row());
  rep.rows.push_back(transit.row());
  rep.rows.push_back(holo.row());
}

void suite_indicatrix(const SuiteConfig& cfg, const SampleSet& S, ResidualReport& rep) {
  CheckAcc fitted("indicatrix", "fitted-constant", "analytic", 1e-6);
  CheckAcc spread("indicatrix", "spread", "analytic", 1e-6);
  CheckAcc resid("indicatrix", "wedge-residual", "analytic", 1e-6);
  CheckAcc pcons("indicatrix", "conformal-multiplier", "analytic", 1e-12);

  const double want = cfg.g * cfg.g / 4.0;
  const int points = std::min(4, cfg.samples);
  const int dirs = std::max(4, cfg.samples / points);
  Sampler smp(cfg.seed + 2);
  for (int p = 0; p < points; ++p) {
    const Vec& x = S.xs[p];
    const PointFrame pf = S.frames[p];
    std::vector<Vec> ys;
    for (int i = 0; i < dirs; ++i) ys.push_back(smp.y_admissible(pf));
    const IndicatrixReport r = constant_curvature_check(*S.model, x, ys);
    fitted.update(std::fabs(r.fitted_C - want), x, ys[0]);
    spread.update(r.spread, x, ys[0]);
    resid.update(r.residual, x, ys[0]);
    pcons.update(r.p_consistency, x, ys[0]);
  }
  rep.rows.push_back(fitted.row());
  rep.rows.push_back(spread.row());
  rep.rows.push_back(resid.row());
  rep.rows.push_back(pcons.row());
}

}  // namespace

const std::vector<std::string>& known_suites() {
  static const std::vector<std::string> names{"metric",    "automorphism", "connection", "angle",
                                              "curvature", "transport",    "indicatrix"};
  return names;
}

ResidualReport run_suites(const SuiteConfig& cfg) {
  validate_config(cfg);
  std::vector<std::string> pick = cfg.suites.empty() ? known_suites() : cfg.suites;
  for (const auto& s : pick)
    if (std::find(known_suites().begin(), known_suites().end(), s) == known_suites().end())
      throw ConfigError("unknown suite: " + s);

  const SampleSet S = draw_samples(cfg);
  ResidualReport rep;
  rep.info.model = canonical_name(canonical_from_string(cfg.model_id));
  rep.info.dim = cfg.dim;
  rep.info.c = cfg.c;
  rep.info.g = cfg.g;
  rep.info.seed = cfg.seed;
  rep.info.samples = cfg.samples;

  // fixed module order regardless of request order
  for (const auto& name : known_suites()) {
    if (std::find(pick.begin(), pick.end(), name) == pick.end()) continue;
    if (name == "metric")
      suite_metric(cfg, S, rep);
    else if (name == "automorphism")
      suite_automorphism(cfg, S, rep);
    else if (name == "connection")
      suite_connection(cfg, S, rep);
    else if (name == "angle")
      suite_angle(cfg, S, rep);
    else if (name == "curvature")
      suite_curvature(cfg, S, rep);
    else if (name == "transport")
      suite_transport(cfg, S, rep);
    else if (name == "indicatrix")
      suite_indicatrix(cfg, S, rep);
  }
  // rows sort by module then check name
  auto rank = [](const std::string& module) {
    const auto& ks = known_suites();
    return std::find(ks.begin(), ks.end(), module) - ks.begin();
  };
  std::stable_sort(rep.rows.begin(), rep.rows.end(), [&](const CheckRow& a, const CheckRow& b) {
    const auto ra = rank(a.module), rb = rank(b.module);
    return ra != rb ? ra < rb : a.name < b.name;
  });
  return rep;
}

}  // namespace fsgeo
