#pragma once

// Sectioned key/value config files driving the batch verifier, plus the
// little curve-spec grammar used by the transport command.
//
//   [model]            [run]              [output]        [tolerances]
//   type = ii          seed = 7           path = out.json analytic = 1e-8
//   dim = 3            samples = 50       format = json   fd = 1e-6
//   c = 1.0            suites = metric angle
//   g = 0.6            x_lo = -0.8
//   theta_k = .3 .2 .1 x_hi = 0.8
//
// Curve specs: "circle:center=0,0,0:radius=0.5:plane=0,1"
//              "segment:from=0,0,0:to=1,0.5,0"

#include <string>
#include <vector>

#include "fsgeo/background.hpp"
#include "fsgeo/core.hpp"

namespace fsgeo {

struct SuiteConfig {
  std::string model_id = "ii";
  int dim = 3;
  double c = 1.0;
  double g = 0.6;
  ModelKnobs knobs;
  std::uint64_t seed = 7;
  int samples = 50;
  double tol_analytic = 1e-8;
  double tol_fd = 1e-6;
  std::vector<std::string> suites;  // empty means every suite
  std::string out_path;
  std::string format = "json";
  double x_lo = -0.8, x_hi = 0.8;
};

SuiteConfig load_config(const std::string& path);
void validate_config(const SuiteConfig& cfg);

CurvePath parse_curve(const std::string& spec, int dim);

}  // namespace fsgeo
