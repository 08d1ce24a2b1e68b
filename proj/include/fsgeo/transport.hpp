#pragma once

// Parallel transport along base curves: dy^m/ds = N^m_i(x(s), y(s)) xdot^i(s),
// integrated with the classical fixed-step fourth-order scheme so that
// convergence-order studies stay clean. Each run also transports the image
// vectors with the background linear connection and tracks the divergence
// between the two evolutions.

#include <iosfwd>
#include <vector>

#include "fsgeo/background.hpp"
#include "fsgeo/core.hpp"

namespace fsgeo {

enum class TransportStatus { Ok, PoleCrossing, StepTooLarge };

struct TransportRun {
  int steps = 0;
  int steps_completed = 0;
  TransportStatus status = TransportStatus::Ok;
  std::vector<double> s_grid;
  std::vector<Vec> x_series;
  std::vector<std::vector<Vec>> y_series;     // [vector][step]
  std::vector<std::vector<double>> K_series;  // [vector][step]
  std::vector<std::vector<double>> alpha_series;  // [pair][step], pairs in (p<q) order
  double K_drift = 0.0;            // max relative drift of the metric function
  double alpha_drift = 0.0;        // max absolute drift over pairs
  double transitivity_drift = 0.0; // image vs background-transported image
};

TransportRun transport(const BackgroundModel& model, const CurvePath& curve,
                       const std::vector<Vec>& y0s, int steps);

struct HolonomyReport {
  bool closed = false;
  std::vector<double> vector_delta;  // |y(1) - y(0)|_a per vector
  double K_delta = 0.0;
  double alpha_delta = 0.0;
};

HolonomyReport holonomy_report(const BackgroundModel& model, const CurvePath& curve,
                               const std::vector<Vec>& y0s, int steps);

void write_trajectory_csv(std::ostream& os, const TransportRun& run);

}  // namespace fsgeo
