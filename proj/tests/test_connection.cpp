#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fsgeo/connection.hpp"
#include "fsgeo/sampling.hpp"

using namespace fsgeo;

namespace {

const Vec kX{0.15, -0.2, 0.3};

std::shared_ptr<BackgroundModel> model(CanonicalModel which, int dim = 3, double c = 1.0,
                                       double g = 0.8) {
  return make_model(which, dim, c, g);
}

}  // namespace

TEST_CASE("flat constant model has a vanishing connection") {
  auto m = model(CanonicalModel::FlatConstant);
  const PointFrame pf = point_frame(*m, kX);
  Sampler smp(3);
  const Vec y = smp.y_admissible(pf);
  CHECK(max_abs(n_coeffs_closed(pf, y)) < 1e-14);
  const ConnectionData cd = connection_data(pf, y);
  CHECK(max_abs(cd.N2) < 1e-14);
  CHECK(max_abs(cd.N3) < 1e-14);
}

TEST_CASE("zero charge gives the background linear coefficients") {
  auto m = model(CanonicalModel::ConformalRotating, 3, 1.0, 0.0);
  const PointFrame pf = point_frame(*m, kX);
  Sampler smp(5);
  for (int trial = 0; trial < 5; ++trial) {
    const Vec y = smp.y_admissible(pf);
    const Mat N = n_coeffs_closed(pf, y);
    for (int mm = 0; mm < 3; ++mm)
      for (int i = 0; i < 3; ++i) {
        double want = 0.0;
        for (int h = 0; h < 3; ++h) want -= pf.gamma(mm, i, h) * y[h];
        CHECK(N(mm, i) == doctest::Approx(want).epsilon(1e-12));
      }
    const ConnectionData cd = connection_data(pf, y);
    for (int k = 0; k < 3; ++k)
      for (int mm = 0; mm < 3; ++mm)
        for (int nn = 0; nn < 3; ++nn)
          CHECK(cd.N2(k, mm, nn) == doctest::Approx(-pf.gamma(k, mm, nn)).epsilon(1e-12));
    CHECK(max_abs(cd.N3) < 1e-12);
  }
}

TEST_CASE("route agreement across all four assemblies") {
  Sampler smp(17);
  for (auto which : {CanonicalModel::FlatRotating, CanonicalModel::ConformalRotating,
                     CanonicalModel::ConstantCurvature}) {
    for (double g : {0.6, -1.2}) {
      auto m = model(which, 3, 1.0, g);
      const PointFrame pf = point_frame(*m, kX);
      for (int trial = 0; trial < 6; ++trial) {
        const Vec y = smp.y_admissible(pf);
        const Mat Na = n_coeffs_closed(pf, y);
        const Mat Nb = n_coeffs_assembled(pf, y);
        const Mat Nc = n_coeffs_from_tmap(pf, y);
        const Mat Nd = n_coeffs_transitivity(*m, kX, y);
        const double scale = 1.0 + max_abs(Na);
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) {
            CHECK(std::fabs(Na(i, j) - Nb(i, j)) / scale < 1e-9);
            CHECK(std::fabs(Na(i, j) - Nc(i, j)) / scale < 1e-8);
            CHECK(std::fabs(Na(i, j) - Nd(i, j)) / scale < 1e-6);
          }
      }
    }
  }
}

TEST_CASE("derivative coefficients and euler relation") {
  auto m = model(CanonicalModel::ConformalRotating, 3, 1.0, 1.0);
  const PointFrame pf = point_frame(*m, kX);
  Sampler smp(29);
  for (int trial = 0; trial < 6; ++trial) {
    const Vec y = smp.y_admissible(pf);
    const ConnectionData cd = connection_data(pf, y);
    // D^k_{im} y^m = -N^k_i
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 3; ++i) {
        double s = 0.0;
        for (int mm = 0; mm < 3; ++mm) s += cd.D(k, i, mm) * y[mm];
        CHECK(s == doctest::Approx(-cd.N(k, i)).epsilon(1e-9));
      }
    // homogeneity: N degree 1, D degree 0
    for (double k : {0.5, 3.0}) {
      const auto r = connection_homogeneity(pf, y, k);
      CHECK(r.N < 1e-9);
      CHECK(r.D < 1e-9);
    }
    // total symmetry of the lowered third coefficients in (k,n,j)
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
    for (int k = 0; k < 3; ++k)
      for (int mm = 0; mm < 3; ++mm)
        for (int nn = 0; nn < 3; ++nn)
          for (int j = 0; j < 3; ++j) {
            CHECK(std::fabs(low(k, mm, nn, j) - low(nn, mm, k, j)) / ls < 1e-6);
            CHECK(std::fabs(low(k, mm, nn, j) - low(j, mm, nn, k)) / ls < 1e-6);
          }
    // y_k N^k_{mnj} = 0
    for (int mm = 0; mm < 3; ++mm)
      for (int nn = 0; nn < 3; ++nn)
        for (int j = 0; j < 3; ++j) {
          double s = 0.0;
          for (int k = 0; k < 3; ++k) s += md.y_lower[k] * cd.N3(k, mm, nn, j);
          CHECK(std::fabs(s) / ls < 1e-6);
        }
  }
}

TEST_CASE("contraction identities at unit axis norm") {
  Sampler smp(31);
  for (auto which : {CanonicalModel::FlatRotating, CanonicalModel::ConformalRotating}) {
    auto m = model(which, 3, 1.0, 0.9);
    const PointFrame pf = point_frame(*m, kX);
    for (int trial = 0; trial < 6; ++trial) {
      const Vec y = smp.y_admissible(pf);
      const auto r = connection_contractions(pf, y);
      CHECK(r.uN < 1e-7);
      CHECK(r.bN < 1e-7);
      CHECK(r.d_b < 1e-7);
      CHECK(r.d_B < 1e-7);
      CHECK(r.lN < 1e-7);
      CHECK(r.orth < 1e-8);
    }
  }
}

TEST_CASE("covariant suite vanishes on every model") {
  Sampler smp(41);
  for (auto which : {CanonicalModel::FlatConstant, CanonicalModel::FlatRotating,
                     CanonicalModel::ConformalRotating, CanonicalModel::ConstantCurvature}) {
    auto m = model(which, 3, 1.0, 0.8);
    for (int trial = 0; trial < 3; ++trial) {
      const Vec x = smp.x_box(3, -0.5, 0.5);
      const PointFrame pf = point_frame(*m, x);
      const Vec y = smp.y_admissible(pf);
      const auto r = covariant_suite(*m, x, y);
      CHECK(r.dK < 1e-8);
      CHECK(r.dy_lower < 1e-8);
      CHECK(r.dg < 1e-8);
      CHECK(r.dt < 1e-8);
      CHECK(r.dt_jac < 1e-8);
      CHECK(r.ddefo < 1e-8);
      CHECK(r.dF_xform < 1e-8);
      CHECK(r.prop32 < 1e-6);
      CHECK(r.dinv_jac < 1e-6);
    }
  }
}

TEST_CASE("four dimensions work the same") {
  auto m = model(CanonicalModel::FlatRotating, 4, 1.0, 1.2);
  const Vec x{0.1, -0.2, 0.3, 0.05};
  const PointFrame pf = point_frame(*m, x);
  Sampler smp(53);
  const Vec y = smp.y_admissible(pf);
  const Mat Na = n_coeffs_closed(pf, y);
  const Mat Nd = n_coeffs_transitivity(*m, x, y);
  const double scale = 1.0 + max_abs(Na);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(std::fabs(Na(i, j) - Nd(i, j)) / scale < 1e-6);
  const auto r = covariant_suite(*m, x, y);
  CHECK(r.max() < 1e-6);
}
