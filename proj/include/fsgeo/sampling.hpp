#pragma once

// Deterministic sampling. Distributions are built directly on the raw
// mt19937_64 stream (no std::*_distribution), so a given seed yields the
// same draws on every standard library, which the byte-identical report
// guarantee depends on.

#include <cstdint>
#include <random>

#include "fsgeo/background.hpp"
#include "fsgeo/core.hpp"
#include "fsgeo/finsleroid.hpp"

namespace fsgeo {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : eng_(seed) {}

  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  double gauss() {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  Vec x_box(int n, double lo, double hi) {
    Vec x(n);
    for (double& v : x) v = uniform(lo, hi);
    return x;
  }

  // Unit-sphere direction rejecting the axis pole cones, scaled to a radius
  // in [0.5, 2]. Cone radius 1e-3 keeps samples clear of the guard band.
  Vec y_admissible(const PointFrame& pf, double cone = 1e-3) {
    const int n = pf.a.n();
    for (;;) {
      Vec y(n);
      for (double& v : y) v = gauss();
      double nrm = std::sqrt(dot(y, y));
      if (nrm < 1e-8) continue;
      for (double& v : y) v /= nrm;
      const double S = std::sqrt(quad(pf.a, y, y));
      double cosang = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) cosang += pf.a(i, j) * y[i] * pf.bt_up[j];
      cosang /= S;
      const double ang = std::acos(std::clamp(cosang, -1.0, 1.0));
      if (ang < cone || ang > M_PI - cone) continue;
      const double r = uniform(0.5, 2.0);
      for (double& v : y) v *= r;
      return y;
    }
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace fsgeo
