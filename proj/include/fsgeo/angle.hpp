#pragma once

// Two-vector angle and the scalar it is built from, with closed-form fiber
// derivatives and the charge-derivative relation. The angle reduces to the
// background angle of the two image vectors divided by the homogeneity
// degree, which is what makes its preservation equivalent to the background
// transport preserving the ordinary angle.

#include <vector>

#include "fsgeo/background.hpp"
#include "fsgeo/connection.hpp"
#include "fsgeo/core.hpp"
#include "fsgeo/finsleroid.hpp"

namespace fsgeo {

struct AngleData {
  Vec t1, t2;
  double S1 = 0, S2 = 0;
  double lambda = 0;  // clamped to [-1, 1]
  double alpha = 0;   // arccos(lambda) / h
  double sigma1 = 0, sigma2 = 0;
  double z1 = 0, z2 = 0;
  double v12 = 0;  // r_in y1^i y2^n
};

AngleData two_vector_angle(const PointFrame& pf, const Vec& y1, const Vec& y2);

struct LambdaDerivs {
  Vec dy1, dy2;
};

// Closed fiber derivatives (axis norm c = 1).
LambdaDerivs dlambda_dy_closed(const PointFrame& pf, const Vec& y1, const Vec& y2);
// Assembled from the map Jacobians, valid at any c.
LambdaDerivs dlambda_dy_generic(const PointFrame& pf, const Vec& y1, const Vec& y2);
// Jet differentiation straight through the map, valid at any c.
LambdaDerivs dlambda_dy_jets(const PointFrame& pf, const Vec& y1, const Vec& y2);

// d lambda / d g by symmetric differencing in the charge (the oracle) and by
// the closed-form right sides; requires c = 1 for the closed forms.
struct DLambdaDg {
  double fd = 0;          // differenced in g
  double sigma_form = 0;  // axis-contraction form
  double z_form = 0;      // Cartan-contraction form (NaN at g = 0)
};
DLambdaDg dlambda_dg(const BackgroundModel& model, const Vec& x, const Vec& y1, const Vec& y2);

// |d_i lambda| with the connection from the closed form; analytic in x.
double angle_equation_residual(const PointFrame& pf, const Vec& y1, const Vec& y2);

}  // namespace fsgeo
