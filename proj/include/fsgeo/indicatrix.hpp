#pragma once

// Executable certificate that the indicatrix is a space of constant
// curvature: the fiber curvature tensor built from the Cartan tensor must be
// proportional to the angular-metric wedge, with the constant pinned to
// 1 - h^2 = g^2/4. The constant is fitted by projection onto the wedge
// rather than read off one component.

#include <vector>

#include "fsgeo/background.hpp"
#include "fsgeo/core.hpp"
#include "fsgeo/finsleroid.hpp"

namespace fsgeo {

// S_{nmij}, antisymmetric in (n,m) and (i,j).
Ten4 s_tensor_lowered(const MetricData& md);

// Least-squares constant of S against (h wedge h); *residual gets the
// relative misfit (absolute when S ~ 0, i.e. the Riemannian limit).
double fit_indicatrix_constant(const MetricData& md, const Ten4& S, double* residual);

struct IndicatrixReport {
  int samples = 0;
  double fitted_C = 0.0;    // mean fitted value
  double spread = 0.0;      // worst deviation from the mean
  double residual = 0.0;    // worst wedge-misfit
  double h_squared = 0.0;   // 1 - fitted_C
  double p_consistency = 0.0;
};

IndicatrixReport constant_curvature_check(const BackgroundModel& model, const Vec& x,
                                          const std::vector<Vec>& ys);

}  // namespace fsgeo
