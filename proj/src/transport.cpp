#include "fsgeo/transport.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "fsgeo/angle.hpp"
#include "fsgeo/automorphism.hpp"
#include "fsgeo/connection.hpp"
#include "fsgeo/finsleroid.hpp"

namespace fsgeo {

namespace {

constexpr double kStepDriftLimit = 1e-3;

Vec rhs_finsler(const BackgroundModel& model, const Vec& x, const Vec& y, const Vec& xdot) {
  const PointFrame pf = point_frame(model, x);
  const Mat N = n_coeffs_closed(pf, y);
  const int n = model.dim();
  Vec dy(n, 0.0);
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i) dy[m] += N(m, i) * xdot[i];
  return dy;
}

Vec rhs_riemann(const BackgroundModel& model, const Vec& x, const Vec& T, const Vec& xdot) {
  const Ten3 gamma = christoffel(model, x);
  const int n = model.dim();
  Vec dT(n, 0.0);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int h = 0; h < n; ++h) dT[k] -= gamma(k, i, h) * T[h] * xdot[i];
  return dT;
}

}  // namespace

TransportRun transport(const BackgroundModel& model, const CurvePath& curve,
                       const std::vector<Vec>& y0s, int steps) {
  if (steps < 16) throw ConfigError("transport: need at least 16 steps");
  const int n = model.dim();
  const int nv = static_cast<int>(y0s.size());
  TransportRun run;
  run.steps = steps;
  run.y_series.assign(nv, {});
  run.K_series.assign(nv, {});
  const int npairs = nv * (nv - 1) / 2;
  run.alpha_series.assign(npairs, {});

  std::vector<Vec> ys = y0s;
  std::vector<Vec> Ts(nv);  // background transport of the image vectors
  {
    const PointFrame pf0 = point_frame(model, curve.x(0.0));
    for (int v = 0; v < nv; ++v) {
      check_admissible(pf0, y0s[v]);
      Ts[v] = t_map(pf0, y0s[v], scalar_pack<double>(pf0, y0s[v]));
    }
  }

  const double hstep = 1.0 / steps;
  std::vector<double> K0(nv);
  std::vector<double> alpha0(npairs);

  auto record = [&](int step_index, double s) {
    const Vec x = curve.x(s);
    const PointFrame pf = point_frame(model, x);
    run.s_grid.push_back(s);
    run.x_series.push_back(x);
    int pair = 0;
    for (int v = 0; v < nv; ++v) {
      const auto P = scalar_pack<double>(pf, ys[v]);
      run.y_series[v].push_back(ys[v]);
      run.K_series[v].push_back(P.K);
      if (step_index == 0) K0[v] = P.K;
      if (step_index > 0) {
        run.K_drift = std::max(run.K_drift, std::fabs(P.K - K0[v]) / K0[v]);
        const double prevK = run.K_series[v][step_index - 1];
        if (std::fabs(P.K - prevK) / K0[v] > kStepDriftLimit) {
          run.status = TransportStatus::StepTooLarge;
          return false;
        }
      }
      const Vec tv = t_map(pf, ys[v], P);
      double diff2 = 0.0, S2 = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          diff2 += pf.a(i, j) * (tv[i] - Ts[v][i]) * (tv[j] - Ts[v][j]);
          S2 += pf.a(i, j) * tv[i] * tv[j];
        }
      if (step_index > 0)
        run.transitivity_drift = std::max(run.transitivity_drift, std::sqrt(diff2 / S2));
    }
    for (int p = 0; p < nv; ++p)
      for (int q = p + 1; q < nv; ++q, ++pair) {
        const double al = two_vector_angle(pf, ys[p], ys[q]).alpha;
        run.alpha_series[pair].push_back(al);
        if (step_index == 0)
          alpha0[pair] = al;
        else
          run.alpha_drift = std::max(run.alpha_drift, std::fabs(al - alpha0[pair]));
      }
    return true;
  };

  try {
    if (!record(0, 0.0)) return run;
    for (int k = 0; k < steps; ++k) {
      const double s = k * hstep;
      for (int v = 0; v < nv; ++v) {
        const Vec k1 = rhs_finsler(model, curve.x(s), ys[v], curve.xdot(s));
        Vec ym(n);
        for (int i = 0; i < n; ++i) ym[i] = ys[v][i] + 0.5 * hstep * k1[i];
        const Vec k2 = rhs_finsler(model, curve.x(s + 0.5 * hstep), ym, curve.xdot(s + 0.5 * hstep));
        for (int i = 0; i < n; ++i) ym[i] = ys[v][i] + 0.5 * hstep * k2[i];
        const Vec k3 = rhs_finsler(model, curve.x(s + 0.5 * hstep), ym, curve.xdot(s + 0.5 * hstep));
        for (int i = 0; i < n; ++i) ym[i] = ys[v][i] + hstep * k3[i];
        const Vec k4 = rhs_finsler(model, curve.x(s + hstep), ym, curve.xdot(s + hstep));
        for (int i = 0; i < n; ++i)
          ys[v][i] += hstep / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

        const Vec K1 = rhs_riemann(model, curve.x(s), Ts[v], curve.xdot(s));
        Vec Tm(n);
        for (int i = 0; i < n; ++i) Tm[i] = Ts[v][i] + 0.5 * hstep * K1[i];
        const Vec K2 = rhs_riemann(model, curve.x(s + 0.5 * hstep), Tm, curve.xdot(s + 0.5 * hstep));
        for (int i = 0; i < n; ++i) Tm[i] = Ts[v][i] + 0.5 * hstep * K2[i];
        const Vec K3 = rhs_riemann(model, curve.x(s + 0.5 * hstep), Tm, curve.xdot(s + 0.5 * hstep));
        for (int i = 0; i < n; ++i) Tm[i] = Ts[v][i] + hstep * K3[i];
        const Vec K4 = rhs_riemann(model, curve.x(s + hstep), Tm, curve.xdot(s + hstep));
        for (int i = 0; i < n; ++i)
          Ts[v][i] += hstep / 6.0 * (K1[i] + 2.0 * K2[i] + 2.0 * K3[i] + K4[i]);
      }
      if (!record(k + 1, (k + 1) * hstep)) return run;
      run.steps_completed = k + 1;
    }
  } catch (const PoleProximityError&) {
    run.status = TransportStatus::PoleCrossing;
  }
  return run;
}

HolonomyReport holonomy_report(const BackgroundModel& model, const CurvePath& curve,
                               const std::vector<Vec>& y0s, int steps) {
  HolonomyReport rep;
  rep.closed = curve.closed;
  const TransportRun run = transport(model, curve, y0s, steps);
  if (run.status != TransportStatus::Ok || !curve.closed) return rep;
  const int n = model.dim();
  const PointFrame pf = point_frame(model, curve.x(0.0));
  for (size_t v = 0; v < y0s.size(); ++v) {
    const Vec& y1 = run.y_series[v].back();
    double d2 = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d2 += pf.a(i, j) * (y1[i] - y0s[v][i]) * (y1[j] - y0s[v][j]);
    rep.vector_delta.push_back(std::sqrt(d2));
    rep.K_delta = std::max(rep.K_delta,
                           std::fabs(run.K_series[v].back() - run.K_series[v].front()));
  }
  for (const auto& series : run.alpha_series)
    rep.alpha_delta = std::max(rep.alpha_delta, std::fabs(series.back() - series.front()));
  return rep;
}

void write_trajectory_csv(std::ostream& os, const TransportRun& run) {
  const int nv = static_cast<int>(run.y_series.size());
  const int n = run.x_series.empty() ? 0 : static_cast<int>(run.x_series[0].size());
  os << "s";
  for (int i = 0; i < n; ++i) os << ",x" << i;
  for (int v = 0; v < nv; ++v) {
    for (int i = 0; i < n; ++i) os << ",y" << v << "_" << i;
    os << ",K" << v;
  }
  for (size_t p = 0; p < run.alpha_series.size(); ++p) os << ",alpha" << p;
  os << "\n";
  char buf[40];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
  };
  for (size_t k = 0; k < run.s_grid.size(); ++k) {
    put(run.s_grid[k]);
    for (int i = 0; i < n; ++i) {
      os << ",";
      put(run.x_series[k][i]);
    }
    for (int v = 0; v < nv; ++v) {
      for (int i = 0; i < n; ++i) {
        os << ",";
        put(run.y_series[v][k][i]);
      }
      os << ",";
      put(run.K_series[v][k]);
    }
    for (const auto& series : run.alpha_series) {
      os << ",";
      put(series[k]);
    }
    os << "\n";
  }
}

}  // namespace fsgeo
