#include "fsgeo/indicatrix.hpp"

#include <cmath>

#include "fsgeo/automorphism.hpp"

namespace fsgeo {

Ten4 s_tensor_lowered(const MetricData& md) {
  const int n = md.g.n();
  const double K2 = md.s.K * md.s.K;
  // dC^m_{ni}/dy^j = d(g^{mh})/dy^j C_{hni} + g^{mh} dC_{hni}/dy^j
  Ten4 dCm(n);
  for (int m = 0; m < n; ++m)
    for (int nn = 0; nn < n; ++nn)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = 0.0;
          for (int h = 0; h < n; ++h) {
            double dginv = 0.0;
            for (int a = 0; a < n; ++a)
              for (int b = 0; b < n; ++b) dginv -= 2.0 * md.ginv(m, a) * md.C_low(a, b, j) * md.ginv(b, h);
            s += dginv * md.C_low(h, nn, i) + md.ginv(m, h) * md.dC_low(h, nn, i, j);
          }
          dCm(m, nn, i, j) = s;
        }
  Ten4 S(n);
  for (int nn = 0; nn < n; ++nn)
    for (int m = 0; m < n; ++m)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = dCm(m, nn, i, j) - dCm(m, nn, j, i);
          for (int h = 0; h < n; ++h)
            s += md.C_mixed(h, nn, i) * md.C_mixed(m, h, j) - md.C_mixed(h, nn, j) * md.C_mixed(m, h, i);
          S(nn, m, i, j) = s * K2;
        }
  // lower the contravariant slot
  Ten4 out(n);
  for (int nn = 0; nn < n; ++nn)
    for (int m = 0; m < n; ++m)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = 0.0;
          for (int h = 0; h < n; ++h) s += md.g(m, h) * S(nn, h, i, j);
          out(nn, m, i, j) = s;
        }
  return out;
}

double fit_indicatrix_constant(const MetricData& md, const Ten4& S, double* residual) {
  const int n = md.g.n();
  Mat ang(n);  // angular metric
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) ang(i, j) = md.g(i, j) - md.l_lower[i] * md.l_lower[j];
  double sw = 0.0, ww = 0.0, ss = 0.0;
  Ten4 W(n);
  for (int nn = 0; nn < n; ++nn)
    for (int m = 0; m < n; ++m)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const double w = ang(nn, j) * ang(m, i) - ang(nn, i) * ang(m, j);
          W(nn, m, i, j) = w;
          sw += S(nn, m, i, j) * w;
          ww += w * w;
          ss += S(nn, m, i, j) * S(nn, m, i, j);
        }
  const double C = sw / ww;
  if (residual) {
    double mis = 0.0;
    for (size_t i = 0; i < S.raw().size(); ++i) {
      const double d = S.raw()[i] - C * W.raw()[i];
      mis += d * d;
    }
    const double nrm = std::sqrt(ss);
    *residual = nrm > 1e-10 ? std::sqrt(mis) / nrm : std::sqrt(mis);
  }
  return C;
}

IndicatrixReport constant_curvature_check(const BackgroundModel& model, const Vec& x,
                                          const std::vector<Vec>& ys) {
  const PointFrame pf = point_frame(model, x);
  IndicatrixReport rep;
  rep.samples = static_cast<int>(ys.size());
  std::vector<double> cs;
  cs.reserve(ys.size());
  for (const Vec& y : ys) {
    const MetricData md = metric_data(pf, y);
    const Ten4 S = s_tensor_lowered(md);
    double res = 0.0;
    const double C = fit_indicatrix_constant(md, S, &res);
    rep.residual = std::max(rep.residual, res);
    cs.push_back(C);
    const AutomorphismEval ev = automorphism_eval(pf, y);
    const double p_ind = std::pow(md.s.K, 1.0 - pf.h) / pf.h;
    rep.p_consistency = std::max(rep.p_consistency, std::fabs(p_ind - ev.p));
  }
  double mean = 0.0;
  for (double c : cs) mean += c;
  mean /= static_cast<double>(cs.size());
  rep.fitted_C = mean;
  for (double c : cs) rep.spread = std::max(rep.spread, std::fabs(c - mean));
  rep.h_squared = 1.0 - mean;
  return rep;
}

}  // namespace fsgeo
