#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fsgeo/finsleroid.hpp"
#include "fsgeo/sampling.hpp"

using namespace fsgeo;

namespace {

PointFrame frame(CanonicalModel which, const Vec& x, int dim = 3, double c = 1.0, double g = 0.8) {
  auto m = make_model(which, dim, c, g);
  return point_frame(*m, x);
}

const Vec kX{0.15, -0.2, 0.3};

}  // namespace

TEST_CASE("scalar identities hold on random admissible samples") {
  Sampler smp(42);
  for (double c : {1.0, 0.8}) {
    for (double g : {0.0, 0.6, -1.2}) {
      const PointFrame pf = frame(CanonicalModel::ConformalRotating, kX, 3, c, g);
      for (int trial = 0; trial < 40; ++trial) {
        const Vec y = smp.y_admissible(pf);
        const FinsleroidEval e = finsleroid_eval(pf, y);
        CHECK(std::fabs(e.L * e.L + e.h * e.h * e.b * e.b - e.B) < 1e-10 * (1.0 + e.B));
        CHECK(std::fabs(e.B - e.h * e.h * e.qt * e.qt - e.A * e.A) < 1e-10 * (1.0 + e.B));
        CHECK(e.f >= 0.0);
        CHECK(e.f <= M_PI);
        CHECK(e.K > 0.0);
        CHECK(e.f == doctest::Approx(std::acos(e.A / std::sqrt(e.B))).epsilon(1e-12));
        // tau - wt (tau' - wt) = 1 with tau' = g + 2 wt
        if (std::isfinite(e.tau)) {
          const double taup = pf.g + 2.0 * e.wt;
          CHECK(std::fabs(e.tau - e.wt * (taup - e.wt) - 1.0) < 1e-9 * (1.0 + std::fabs(e.tau)));
        }
        // e_i is fiber-orthogonal to y
        CHECK(std::fabs(dot(e.e, y)) < 1e-10 * (1.0 + dot(y, y)));
      }
    }
  }
}

TEST_CASE("branch form of chi is continuous across b = 0 and equals the polar form") {
  const PointFrame pf = frame(CanonicalModel::FlatConstant, kX, 3, 1.0, 1.2);
  // walk y through the plane orthogonal to the axis: b changes sign
  const Vec perp{0.0, 1.0, 0.0};  // axis is along e1 for the flat model
  for (double tshift : {-1e-3, -1e-7, -1e-12, 0.0, 1e-12, 1e-7, 1e-3}) {
    Vec y(3);
    for (int i = 0; i < 3; ++i) y[i] = perp[i] + tshift * pf.bt_up[i];
    const auto P = scalar_pack<double>(pf, y);
    const double f = std::acos(P.A / std::sqrt(P.B));
    CHECK(P.chi == doctest::Approx(f / pf.h).epsilon(1e-12));
  }
  Vec ym(3), yp(3);
  for (int i = 0; i < 3; ++i) {
    ym[i] = perp[i] - 1e-9 * pf.bt_up[i];
    yp[i] = perp[i] + 1e-9 * pf.bt_up[i];
  }
  const double cm = scalar_pack<double>(pf, ym).chi;
  const double cp = scalar_pack<double>(pf, yp).chi;
  CHECK(std::fabs(cp - cm) < 1e-8);
}

TEST_CASE("axis normalization") {
  // K -> 1 approaching the pole along shrinking rays at c = 1; f(b)=0, f(-b)=pi
  for (auto which : {CanonicalModel::FlatConstant, CanonicalModel::ConformalRotating}) {
    const PointFrame pf = frame(which, kX, 3, 1.0, 1.2);
    const Vec perp = [&] {
      Vec p{0.0, 0.0, 1.0};
      double pb = 0.0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) pb += pf.a(i, j) * p[i] * pf.bt_up[j];
      for (int i = 0; i < 3; ++i) p[i] -= pb * pf.bt_up[i];
      const double nn = std::sqrt(quad(pf.a, p, p));
      for (double& v : p) v /= nn;
      return p;
    }();
    for (double sgn : {1.0, -1.0}) {
      Vec y(3);
      const double eps = 1e-4;  // qt/|y| ~ eps ray toward the pole
      for (int i = 0; i < 3; ++i) y[i] = sgn * pf.b_up[i] + eps * perp[i];
      const auto P = scalar_pack<double>(pf, y);
      if (sgn > 0) {
        CHECK(std::fabs(P.K - 1.0) < 1e-8);
        CHECK(std::fabs(P.f) < 1e-3);
      } else {
        // the opposite pole carries the asymmetric value exp(-g pi / (2h))
        CHECK(std::fabs(P.K - std::exp(-pf.g * M_PI / (2.0 * pf.h))) < 1e-8);
        CHECK(std::fabs(P.f - M_PI) < 1e-3);
      }
    }
  }
}

TEST_CASE("covector equals the fiber gradient of K^2/2 at any axis norm") {
  Sampler smp(3);
  for (double c : {1.0, 0.75}) {
    const PointFrame pf = frame(CanonicalModel::ConformalRotating, kX, 4, c, 0.9);
    for (int trial = 0; trial < 20; ++trial) {
      const Vec y = smp.y_admissible(pf);
      const auto yj = lift(y, 1);
      const auto Pj = scalar_pack<Jet>(pf, yj);
      const auto cov = covector(pf, yj, Pj);
      for (int i = 0; i < 4; ++i) {
        const double oracle = Pj.K.value() * Pj.K.d1(i);
        CHECK(cov[i].value() == doctest::Approx(oracle).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("metric data invariants") {
  Sampler smp(7);
  for (double c : {1.0, 0.8}) {
    for (double g : {0.6, -1.2}) {
      const PointFrame pf = frame(CanonicalModel::ConformalRotating, kX, 3, c, g);
      for (int trial = 0; trial < 15; ++trial) {
        const Vec y = smp.y_admissible(pf);
        const MetricData md = metric_data(pf, y);
        const int n = 3;
        CHECK(quad(md.g, y, y) == doctest::Approx(md.s.K * md.s.K).epsilon(1e-9));
        const Vec gy = mat_vec(md.g, y);
        for (int i = 0; i < n; ++i)
          CHECK(md.y_lower[i] == doctest::Approx(gy[i]).epsilon(1e-10));
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += md.C_low(i, j, k) * y[k];
            CHECK(std::fabs(s) < 1e-9 * (1.0 + max_abs(md.C_low)));
            for (int k = 0; k < n; ++k) {
              CHECK(md.C_low(i, j, k) == doctest::Approx(md.C_low(j, i, k)).epsilon(1e-9));
              CHECK(md.C_low(i, j, k) == doctest::Approx(md.C_low(i, k, j)).epsilon(1e-9));
            }
          }
        for (int i = 0; i < n; ++i)
          for (int k = 0; k < n; ++k) {
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += md.g(i, j) * md.ginv(j, k);
            CHECK(std::fabs(s - (i == k ? 1.0 : 0.0)) < 1e-10);
          }
        double ll = 0.0;
        for (int i = 0; i < n; ++i) ll += md.l_lower[i] * md.l_upper[i];
        CHECK(ll == doctest::Approx(1.0).epsilon(1e-10));
        const Vec ev = sym_eigenvalues(md.g);
        CHECK(ev.front() > 0.0);
        double mm = 0.0, ml = 0.0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) mm += md.g(i, j) * md.m_upper[i] * md.m_upper[j];
        for (int i = 0; i < n; ++i) ml += md.m_upper[i] * md.l_lower[i];
        CHECK(mm == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(std::fabs(ml) < 1e-9);
        // the frame vector is the normalized Cartan direction at any c
        {
          double cc = 0.0;
          Vec cup(n, 0.0);
          for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i) cup[k] += md.ginv(k, i) * md.C_contr[i];
          for (int k = 0; k < n; ++k) cc += cup[k] * md.C_contr[k];
          for (int k = 0; k < n; ++k) {
            const double want = (g > 0 ? 1.0 : -1.0) * cup[k] / std::sqrt(cc);
            CHECK(md.m_upper[k] == doctest::Approx(want).epsilon(1e-8));
          }
        }
        if (c == 1.0) {
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
              const double want = md.s.B / (md.s.K * md.s.K) * md.eta(i, j);
              CHECK(md.Hproj(i, j) == doctest::Approx(want).epsilon(1e-9));
            }
        }
      }
    }
  }
}

TEST_CASE("determinant and cartan-norm closed forms") {
  Sampler smp(19);
  for (auto which : {CanonicalModel::FlatConstant, CanonicalModel::ConformalRotating}) {
    for (double g : {0.0, 0.6, 1.2}) {
      const PointFrame pf = frame(which, kX, 3, 1.0, g);
      for (int trial = 0; trial < 10; ++trial) {
        const Vec y = smp.y_admissible(pf);
        const MetricData md = metric_data(pf, y);
        const double want = std::pow(md.s.K * md.s.K / md.s.B, 3) * mat_det(pf.a);
        CHECK(mat_det(md.g) == doctest::Approx(want).epsilon(1e-8));
        double AA = 0.0;
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            AA += md.ginv(i, j) * md.s.K * md.C_contr[i] * md.s.K * md.C_contr[j];
        CHECK(AA == doctest::Approx(9.0 * g * g / 4.0).epsilon(1e-8));
        if (g != 0.0) {
          double cc = 0.0;
          for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) cc += md.ginv(i, j) * md.C_contr[i] * md.C_contr[j];
          for (int k = 0; k < 3; ++k) {
            double cu = 0.0;
            for (int i = 0; i < 3; ++i) cu += md.ginv(k, i) * md.C_contr[i];
            const double want_m = cu / std::sqrt(cc);
            const double got = (g > 0 ? md.m_upper[k] : -md.m_upper[k]);
            CHECK(got == doctest::Approx(want_m).epsilon(1e-8));
          }
        }
      }
    }
  }
}

TEST_CASE("riemannian limit at zero charge") {
  const PointFrame pf = frame(CanonicalModel::ConformalRotating, kX, 3, 1.0, 0.0);
  Sampler smp(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Vec y = smp.y_admissible(pf);
    const MetricData md = metric_data(pf, y);
    CHECK(md.s.J == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(md.s.K == doctest::Approx(std::sqrt(quad(pf.a, y, y))).epsilon(1e-12));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(md.g(i, j) == doctest::Approx(pf.a(i, j)).epsilon(1e-12));
    CHECK(max_abs(md.C_low) < 1e-12);
  }
}

TEST_CASE("homogeneity") {
  const PointFrame pf = frame(CanonicalModel::ConformalRotating, kX, 3, 1.0, 1.2);
  Sampler smp(23);
  for (double k : {0.5, 1.0, 2.0, 7.0}) {
    const Vec y = smp.y_admissible(pf);
    const auto r = homogeneity_check(pf, y, k);
    CHECK(r.K < 1e-10);
    CHECK(r.y_lower < 1e-10);
    CHECK(r.g < 1e-10);
    CHECK(r.cartan < 1e-10);
    CHECK(r.euler < 1e-10);
  }
}

TEST_CASE("pole guard and zero vector errors") {
  const PointFrame pf = frame(CanonicalModel::FlatConstant, kX, 3, 1.0, 0.8);
  CHECK_THROWS_AS(finsleroid_eval(pf, Vec{0.0, 0.0, 0.0}), ZeroVectorError);
  Vec axis = pf.b_up;  // exactly on the pole
  CHECK_THROWS_AS(finsleroid_eval(pf, axis), PoleProximityError);
  Vec near = axis;
  near[1] += 1e-8;  // still inside the guard band
  CHECK_THROWS_AS(finsleroid_eval(pf, near), PoleProximityError);
}
