#include "fsgeo/background.hpp"

#include <cmath>

namespace fsgeo {

namespace {

double sq(double x) { return x * x; }

}  // namespace

ConformalBackground::ConformalBackground(int dim, double c, double g, ModelKnobs knobs)
    : n_(dim), c_(c), g_(g), kn_(std::move(knobs)) {
  if (n_ < 3) throw ConfigError("background: dimension must be >= 3");
  if (!(c_ > 0.0 && c_ <= 1.0)) throw ConfigError("background: c out of (0,1]");
  if (!(g_ > -2.0 && g_ < 2.0)) throw ConfigError("background: g out of (-2,2)");
  if (kn_.theta_k.empty()) kn_.theta_k.assign(n_, 0.0);
  if (kn_.phi_wave.empty()) kn_.phi_wave.assign(n_, 0.0);
  if (kn_.phi_lin.empty()) kn_.phi_lin.assign(n_, 0.0);
  if (kn_.axis_i == kn_.axis_j || kn_.axis_i >= n_ || kn_.axis_j >= n_)
    throw ConfigError("background: bad rotation plane");
}

double ConformalBackground::phi(const Vec& x) const {
  double s = dot(kn_.phi_lin, x) + kn_.phi_amp * std::sin(dot(kn_.phi_wave, x));
  if (kn_.curvature != 0.0) s -= std::log(1.0 + 0.25 * kn_.curvature * dot(x, x));
  return s;
}

Vec ConformalBackground::phi_d1(const Vec& x) const {
  Vec d(n_, 0.0);
  const double cw = std::cos(dot(kn_.phi_wave, x));
  const double u = 1.0 + 0.25 * kn_.curvature * dot(x, x);
  for (int k = 0; k < n_; ++k) {
    d[k] = kn_.phi_lin[k] + kn_.phi_amp * cw * kn_.phi_wave[k];
    if (kn_.curvature != 0.0) d[k] -= 0.5 * kn_.curvature * x[k] / u;
  }
  return d;
}

Mat ConformalBackground::phi_d2(const Vec& x) const {
  Mat d(n_);
  const double sw = std::sin(dot(kn_.phi_wave, x));
  const double u = 1.0 + 0.25 * kn_.curvature * dot(x, x);
  for (int k = 0; k < n_; ++k)
    for (int l = 0; l < n_; ++l) {
      d(k, l) = -kn_.phi_amp * sw * kn_.phi_wave[k] * kn_.phi_wave[l];
      if (kn_.curvature != 0.0) {
        if (k == l) d(k, l) -= 0.5 * kn_.curvature / u;
        d(k, l) += 0.25 * sq(kn_.curvature) * x[k] * x[l] / sq(u);
      }
    }
  return d;
}

Ten3 ConformalBackground::phi_d3(const Vec& x) const {
  Ten3 d(n_);
  const double cw = std::cos(dot(kn_.phi_wave, x));
  const double u = 1.0 + 0.25 * kn_.curvature * dot(x, x);
  const double K = kn_.curvature;
  for (int k = 0; k < n_; ++k)
    for (int l = 0; l < n_; ++l)
      for (int m = 0; m < n_; ++m) {
        d(k, l, m) = -kn_.phi_amp * cw * kn_.phi_wave[k] * kn_.phi_wave[l] * kn_.phi_wave[m];
        if (K != 0.0) {
          double t = 0.0;
          if (k == l) t += x[m];
          if (k == m) t += x[l];
          if (l == m) t += x[k];
          d(k, l, m) += 0.25 * sq(K) * t / sq(u) - 0.25 * K * sq(K) * x[k] * x[l] * x[m] / (u * sq(u));
        }
      }
  return d;
}

double ConformalBackground::theta(const Vec& x) const { return kn_.theta0 + dot(kn_.theta_k, x); }

Vec ConformalBackground::axis_n(const Vec& x) const {
  Vec n(n_, 0.0);
  n[kn_.axis_i] = std::cos(theta(x));
  n[kn_.axis_j] = std::sin(theta(x));
  return n;
}

Mat ConformalBackground::axis_n_d1(const Vec& x) const {
  Mat d(n_);
  const double th = theta(x);
  for (int k = 0; k < n_; ++k) {
    d(k, kn_.axis_i) = -std::sin(th) * kn_.theta_k[k];
    d(k, kn_.axis_j) = std::cos(th) * kn_.theta_k[k];
  }
  return d;
}

Ten3 ConformalBackground::axis_n_d2(const Vec& x) const {
  Ten3 d(n_);
  const double th = theta(x);
  for (int k = 0; k < n_; ++k)
    for (int l = 0; l < n_; ++l) {
      d(k, l, kn_.axis_i) = -std::cos(th) * kn_.theta_k[k] * kn_.theta_k[l];
      d(k, l, kn_.axis_j) = -std::sin(th) * kn_.theta_k[k] * kn_.theta_k[l];
    }
  return d;
}

Mat ConformalBackground::metric(const Vec& x) const {
  Mat a(n_);
  const double e = std::exp(2.0 * phi(x));
  for (int i = 0; i < n_; ++i) a(i, i) = e;
  return a;
}

Ten3 ConformalBackground::metric_d1(const Vec& x) const {
  Ten3 d(n_);
  const double e = std::exp(2.0 * phi(x));
  const Vec p = phi_d1(x);
  for (int k = 0; k < n_; ++k)
    for (int i = 0; i < n_; ++i) d(k, i, i) = 2.0 * p[k] * e;
  return d;
}

Ten4 ConformalBackground::metric_d2(const Vec& x) const {
  Ten4 d(n_);
  const double e = std::exp(2.0 * phi(x));
  const Vec p = phi_d1(x);
  const Mat pp = phi_d2(x);
  for (int k = 0; k < n_; ++k)
    for (int l = 0; l < n_; ++l) {
      const double f = (2.0 * pp(k, l) + 4.0 * p[k] * p[l]) * e;
      for (int i = 0; i < n_; ++i) d(k, l, i, i) = f;
    }
  return d;
}

Ten5 ConformalBackground::metric_d3(const Vec& x) const {
  Ten5 d(n_);
  const double e = std::exp(2.0 * phi(x));
  const Vec p = phi_d1(x);
  const Mat pp = phi_d2(x);
  const Ten3 ppp = phi_d3(x);
  for (int k = 0; k < n_; ++k)
    for (int l = 0; l < n_; ++l)
      for (int m = 0; m < n_; ++m) {
        const double f = (2.0 * ppp(k, l, m) +
                          4.0 * (pp(k, l) * p[m] + pp(k, m) * p[l] + pp(l, m) * p[k]) +
                          8.0 * p[k] * p[l] * p[m]) *
                         e;
        for (int i = 0; i < n_; ++i) d(k, l, m, i, i) = f;
      }
  return d;
}

Vec ConformalBackground::oneform(const Vec& x) const {
  Vec b = axis_n(x);
  const double f = c_ * std::exp(phi(x));
  for (double& v : b) v *= f;
  return b;
}

Mat ConformalBackground::oneform_d1(const Vec& x) const {
  Mat d(n_);
  const double f = c_ * std::exp(phi(x));
  const Vec p = phi_d1(x);
  const Vec n = axis_n(x);
  const Mat dn = axis_n_d1(x);
  for (int k = 0; k < n_; ++k)
    for (int i = 0; i < n_; ++i) d(k, i) = f * (p[k] * n[i] + dn(k, i));
  return d;
}

Ten3 ConformalBackground::oneform_d2(const Vec& x) const {
  Ten3 d(n_);
  const double f = c_ * std::exp(phi(x));
  const Vec p = phi_d1(x);
  const Mat pp = phi_d2(x);
  const Vec n = axis_n(x);
  const Mat dn = axis_n_d1(x);
  const Ten3 ddn = axis_n_d2(x);
  for (int k = 0; k < n_; ++k)
    for (int l = 0; l < n_; ++l)
      for (int i = 0; i < n_; ++i)
        d(k, l, i) = f * ((pp(k, l) + p[k] * p[l]) * n[i] + p[k] * dn(l, i) + p[l] * dn(k, i) + ddn(k, l, i));
  return d;
}

CanonicalModel canonical_from_string(const std::string& s) {
  if (s == "i" || s == "flat-constant") return CanonicalModel::FlatConstant;
  if (s == "ii" || s == "flat-rotating") return CanonicalModel::FlatRotating;
  if (s == "iii" || s == "conformal-rotating") return CanonicalModel::ConformalRotating;
  if (s == "iv" || s == "constant-curvature") return CanonicalModel::ConstantCurvature;
  throw ConfigError("unknown model id: " + s);
}

std::string canonical_name(CanonicalModel m) {
  switch (m) {
    case CanonicalModel::FlatConstant: return "flat-constant";
    case CanonicalModel::FlatRotating: return "flat-rotating";
    case CanonicalModel::ConformalRotating: return "conformal-rotating";
    case CanonicalModel::ConstantCurvature: return "constant-curvature";
  }
  return "?";
}

std::shared_ptr<BackgroundModel> make_model(CanonicalModel which, int dim, double c, double g,
                                            const ModelKnobs& knobs) {
  ModelKnobs k = knobs;
  auto default_covec = [&](double scale) {
    Vec v(dim, 0.0);
    for (int i = 0; i < dim; ++i) v[i] = scale * (1.0 - 0.35 * i / std::max(1, dim - 1));
    return v;
  };
  switch (which) {
    case CanonicalModel::FlatConstant:
      k.phi_amp = 0.0;
      k.phi_lin.assign(dim, 0.0);
      k.curvature = 0.0;
      k.theta_k.assign(dim, 0.0);
      break;
    case CanonicalModel::FlatRotating:
      k.phi_amp = 0.0;
      k.phi_lin.assign(dim, 0.0);
      k.curvature = 0.0;
      if (k.theta_k.empty()) k.theta_k = default_covec(0.30);
      break;
    case CanonicalModel::ConformalRotating:
      if (k.phi_amp == 0.0) k.phi_amp = 0.08;
      if (k.phi_wave.empty()) k.phi_wave = default_covec(0.60);
      if (k.phi_lin.empty()) k.phi_lin = default_covec(0.05);
      k.curvature = 0.0;
      if (k.theta_k.empty()) k.theta_k = default_covec(0.25);
      break;
    case CanonicalModel::ConstantCurvature:
      k.phi_amp = 0.0;
      k.phi_lin.assign(dim, 0.0);
      if (k.curvature == 0.0) k.curvature = 0.5;
      if (k.theta_k.empty()) k.theta_k.assign(dim, 0.0);
      break;
  }
  return std::make_shared<ConformalBackground>(dim, c, g, k);
}

// ---------------------------------------------------------------------------

Ten3 christoffel(const BackgroundModel& m, const Vec& x) {
  const int n = m.dim();
  const Mat ainv = mat_inverse(m.metric(x));
  const Ten3 da = m.metric_d1(x);
  Ten3 gamma(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int nn = 0; nn < n; ++nn) {
        double s = 0.0;
        for (int h = 0; h < n; ++h) s += ainv(i, h) * (da(nn, h, k) + da(k, h, nn) - da(h, k, nn));
        gamma(i, k, nn) = 0.5 * s;
      }
  return gamma;
}

Ten4 christoffel_d1(const BackgroundModel& m, const Vec& x) {
  const int n = m.dim();
  const Mat ainv = mat_inverse(m.metric(x));
  const Ten3 da = m.metric_d1(x);
  const Ten4 dda = m.metric_d2(x);
  // d_m a^{ih} = -a^{ip} (d_m a_pq) a^{qh}
  Ten3 dainv(n);
  for (int mm = 0; mm < n; ++mm)
    for (int i = 0; i < n; ++i)
      for (int h = 0; h < n; ++h) {
        double s = 0.0;
        for (int p = 0; p < n; ++p)
          for (int q = 0; q < n; ++q) s += ainv(i, p) * da(mm, p, q) * ainv(q, h);
        dainv(mm, i, h) = -s;
      }
  Ten4 out(n);
  for (int mm = 0; mm < n; ++mm)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        for (int nn = 0; nn < n; ++nn) {
          double s = 0.0;
          for (int h = 0; h < n; ++h) {
            s += dainv(mm, i, h) * (da(nn, h, k) + da(k, h, nn) - da(h, k, nn));
            s += ainv(i, h) * (dda(mm, nn, h, k) + dda(mm, k, h, nn) - dda(mm, h, k, nn));
          }
          out(mm, i, k, nn) = 0.5 * s;
        }
  return out;
}

Ten4 riemann(const BackgroundModel& m, const Vec& x) {
  const int n = m.dim();
  const Ten3 gm = christoffel(m, x);
  const Ten4 dgm = christoffel_d1(m, x);
  Ten4 r(n);
  for (int nn = 0; nn < n; ++nn)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        for (int mm = 0; mm < n; ++mm) {
          double s = dgm(k, i, nn, mm) - dgm(mm, i, nn, k);
          for (int u = 0; u < n; ++u) s += gm(u, nn, mm) * gm(i, u, k) - gm(u, nn, k) * gm(i, u, mm);
          r(nn, i, k, mm) = s;
        }
  return r;
}

Ten4 riemann_lowered(const BackgroundModel& m, const Vec& x) {
  const int n = m.dim();
  const Mat a = m.metric(x);
  const Ten4 r = riemann(m, x);
  Ten4 out(n);
  for (int nn = 0; nn < n; ++nn)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        for (int mm = 0; mm < n; ++mm) {
          double s = 0.0;
          for (int t = 0; t < n; ++t) s += a(i, t) * r(nn, t, k, mm);
          out(nn, i, k, mm) = s;
        }
  return out;
}

Ten5 riemann_nabla(const BackgroundModel& m, const Vec& x) {
  const int n = m.dim();
  const Ten3 gm = christoffel(m, x);
  const Ten4 r = riemann(m, x);
  Ten5 dr_dx(n);
  if (m.analytic_d3()) {
    // d_k Riemann from the second Christoffel derivatives.
    const Ten3 da = m.metric_d1(x);
    const Ten4 dda = m.metric_d2(x);
    const Ten5 ddda = m.metric_d3(x);
    const Mat ainv = mat_inverse(m.metric(x));
    Ten3 dainv(n);
    for (int mm = 0; mm < n; ++mm)
      for (int i = 0; i < n; ++i)
        for (int h = 0; h < n; ++h) {
          double s = 0.0;
          for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) s += ainv(i, p) * da(mm, p, q) * ainv(q, h);
          dainv(mm, i, h) = -s;
        }
    Ten4 ddainv(n);  // d_l d_m a^{ih}
    for (int l = 0; l < n; ++l)
      for (int mm = 0; mm < n; ++mm)
        for (int i = 0; i < n; ++i)
          for (int h = 0; h < n; ++h) {
            double s = 0.0;
            for (int p = 0; p < n; ++p)
              for (int q = 0; q < n; ++q)
                s += dainv(l, i, p) * da(mm, p, q) * ainv(q, h) + ainv(i, p) * dda(l, mm, p, q) * ainv(q, h) +
                     ainv(i, p) * da(mm, p, q) * dainv(l, q, h);
            ddainv(l, mm, i, h) = -s;
          }
    const Ten4 dgm = christoffel_d1(m, x);
    Ten5 ddgm(n);  // d_l d_m a^i_{kn}
    for (int l = 0; l < n; ++l)
      for (int mm = 0; mm < n; ++mm)
        for (int i = 0; i < n; ++i)
          for (int k = 0; k < n; ++k)
            for (int nn = 0; nn < n; ++nn) {
              double s = 0.0;
              for (int h = 0; h < n; ++h) {
                s += ddainv(l, mm, i, h) * (da(nn, h, k) + da(k, h, nn) - da(h, k, nn));
                s += dainv(mm, i, h) * (dda(l, nn, h, k) + dda(l, k, h, nn) - dda(l, h, k, nn));
                s += dainv(l, i, h) * (dda(mm, nn, h, k) + dda(mm, k, h, nn) - dda(mm, h, k, nn));
                s += ainv(i, h) * (ddda(l, mm, nn, h, k) + ddda(l, mm, k, h, nn) - ddda(l, mm, h, k, nn));
              }
              ddgm(l, mm, i, k, nn) = 0.5 * s;
            }
    for (int l = 0; l < n; ++l)
      for (int nn = 0; nn < n; ++nn)
        for (int i = 0; i < n; ++i)
          for (int k = 0; k < n; ++k)
            for (int mm = 0; mm < n; ++mm) {
              double s = ddgm(l, k, i, nn, mm) - ddgm(l, mm, i, nn, k);
              for (int u = 0; u < n; ++u)
                s += dgm(l, u, nn, mm) * gm(i, u, k) + gm(u, nn, mm) * dgm(l, i, u, k) -
                     dgm(l, u, nn, k) * gm(i, u, mm) - gm(u, nn, k) * dgm(l, i, u, mm);
              dr_dx(l, nn, i, k, mm) = s;
            }
  } else {
    for (int l = 0; l < n; ++l) {
      const Ten4 d = fd_dx([&](const Vec& xx) { return riemann(m, xx); }, x, l, kFdStep);
      for (int a1 = 0; a1 < n; ++a1)
        for (int a2 = 0; a2 < n; ++a2)
          for (int a3 = 0; a3 < n; ++a3)
            for (int a4 = 0; a4 < n; ++a4) dr_dx(l, a1, a2, a3, a4) = d(a1, a2, a3, a4);
    }
  }
  Ten5 out(n);
  for (int k = 0; k < n; ++k)
    for (int h = 0; h < n; ++h)
      for (int t = 0; t < n; ++t)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            double s = dr_dx(k, h, t, i, j);
            for (int u = 0; u < n; ++u)
              s += gm(t, k, u) * r(h, u, i, j) - gm(u, k, h) * r(u, t, i, j) - gm(u, k, i) * r(h, t, u, j) -
                   gm(u, k, j) * r(h, t, i, u);
            out(k, h, t, i, j) = s;
          }
  return out;
}

Mat nabla_oneform(const BackgroundModel& m, const Vec& x) {
  const int n = m.dim();
  const Mat db = m.oneform_d1(x);
  const Vec b = m.oneform(x);
  const Ten3 gm = christoffel(m, x);
  Mat nb(n);
  for (int i = 0; i < n; ++i)
    for (int mm = 0; mm < n; ++mm) {
      double s = db(i, mm);
      for (int h = 0; h < n; ++h) s -= gm(h, i, mm) * b[h];
      nb(i, mm) = s;
    }
  return nb;
}

Mat riem_transport_coeffs(const Ten3& gamma, const Vec& t) {
  const int n = gamma.n();
  Mat L(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int h = 0; h < n; ++h) s += gamma(k, i, h) * t[h];
      L(k, i) = -s;
    }
  return L;
}

double riemannian_angle(const Mat& a, const Vec& t1, const Vec& t2) {
  const double s1 = std::sqrt(quad(a, t1, t1));
  const double s2 = std::sqrt(quad(a, t2, t2));
  if (s1 == 0.0 || s2 == 0.0) throw ZeroVectorError("riemannian_angle: zero vector");
  double lam = quad(a, t1, t2) / (s1 * s2);
  if (lam > 1.0 + 1e-9 || lam < -1.0 - 1e-9)
    throw NumericalInconsistencyError("riemannian_angle: cosine out of range");
  lam = std::clamp(lam, -1.0, 1.0);
  return std::acos(lam);
}

PointFrame point_frame(const BackgroundModel& m, const Vec& x) {
  PointFrame f;
  f.x = x;
  f.a = m.metric(x);
  const Vec ev = sym_eigenvalues(f.a);
  if (ev.front() <= 0.0) throw SingularMetricError("point_frame: metric not positive definite");
  f.ainv = mat_inverse(f.a);
  f.da = m.metric_d1(x);
  f.db = m.oneform_d1(x);
  f.gamma = christoffel(m, x);
  f.b_low = m.oneform(x);
  f.b_up = mat_vec(f.ainv, f.b_low);
  f.c = m.norm_c();
  f.g = m.charge_g();
  f.h = m.degree_h();
  f.bt_low = f.b_low;
  f.bt_up = f.b_up;
  for (double& v : f.bt_low) v /= f.c;
  for (double& v : f.bt_up) v /= f.c;
  f.nabla_b = nabla_oneform(m, x);
  return f;
}

CurvePath circle_path(const Vec& center, double radius, int axis_i, int axis_j) {
  CurvePath p;
  p.closed = true;
  p.x = [=](double s) {
    Vec x = center;
    x[axis_i] += radius * std::cos(2.0 * M_PI * s);
    x[axis_j] += radius * std::sin(2.0 * M_PI * s);
    return x;
  };
  p.xdot = [=](double s) {
    Vec v(center.size(), 0.0);
    v[axis_i] = -radius * 2.0 * M_PI * std::sin(2.0 * M_PI * s);
    v[axis_j] = radius * 2.0 * M_PI * std::cos(2.0 * M_PI * s);
    return v;
  };
  return p;
}

CurvePath segment_path(const Vec& from, const Vec& to) {
  CurvePath p;
  p.closed = false;
  p.x = [=](double s) {
    Vec x(from.size());
    for (size_t i = 0; i < x.size(); ++i) x[i] = from[i] + s * (to[i] - from[i]);
    return x;
  };
  p.xdot = [=](double) {
    Vec v(from.size());
    for (size_t i = 0; i < v.size(); ++i) v[i] = to[i] - from[i];
    return v;
  };
  return p;
}

}  // namespace fsgeo
