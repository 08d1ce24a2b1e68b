// Batch verification driver: runs named residual suites over seeded samples
// and emits machine-readable reports, or transports vector sets along curves
// and reports drift and observed convergence order.
//
// Exit codes: 0 all checks passed, 1 at least one failed, 2 bad config/usage.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fsgeo/config.hpp"
#include "fsgeo/report.hpp"
#include "fsgeo/sampling.hpp"
#include "fsgeo/suites.hpp"
#include "fsgeo/transport.hpp"

namespace {

int run_check(const std::string& config_path, const std::vector<std::string>& suites,
              const std::string& out, const std::string& format) {
  fsgeo::SuiteConfig cfg = fsgeo::load_config(config_path);
  if (!suites.empty()) cfg.suites = suites;
  if (!out.empty()) cfg.out_path = out;
  if (!format.empty()) cfg.format = format;
  fsgeo::validate_config(cfg);

  const fsgeo::ResidualReport rep = fsgeo::run_suites(cfg);
  std::cout << fsgeo::summary_text(rep);
  if (!cfg.out_path.empty()) {
    std::ofstream os(cfg.out_path, std::ios::binary);
    if (!os) throw fsgeo::ConfigError("cannot write: " + cfg.out_path);
    if (cfg.format == "json")
      fsgeo::write_json(rep, os);
    else
      fsgeo::write_csv(rep, os);
    std::cout << "report written to " << cfg.out_path << "\n";
  }
  return rep.all_pass() ? 0 : 1;
}

int run_transport(const std::string& config_path, const std::string& curve_spec,
                  const std::string& steps_arg, int vectors, const std::string& out) {
  fsgeo::SuiteConfig cfg = fsgeo::load_config(config_path);
  auto model = fsgeo::make_model(fsgeo::canonical_from_string(cfg.model_id), cfg.dim, cfg.c, cfg.g,
                                 cfg.knobs);
  const fsgeo::CurvePath curve = fsgeo::parse_curve(curve_spec, cfg.dim);

  std::vector<int> steps;
  {
    std::istringstream is(steps_arg);
    std::string tok;
    while (std::getline(is, tok, ',')) steps.push_back(std::stoi(tok));
    if (steps.empty()) throw fsgeo::ConfigError("empty steps list");
  }

  fsgeo::Sampler smp(cfg.seed);
  const fsgeo::PointFrame pf0 = fsgeo::point_frame(*model, curve.x(0.0));
  std::vector<fsgeo::Vec> y0s;
  for (int i = 0; i < vectors; ++i) y0s.push_back(smp.y_admissible(pf0));

  std::vector<fsgeo::TransportRun> runs;
  std::printf("%8s  %12s  %12s  %12s  status\n", "steps", "K-drift", "alpha-drift", "transit-drift");
  for (int k : steps) {
    runs.push_back(fsgeo::transport(*model, curve, y0s, k));
    const auto& r = runs.back();
    const char* st = r.status == fsgeo::TransportStatus::Ok
                         ? "ok"
                         : (r.status == fsgeo::TransportStatus::PoleCrossing ? "pole-crossing"
                                                                             : "step-too-large");
    std::printf("%8d  %12.5e  %12.5e  %12.5e  %s\n", k, r.K_drift, r.alpha_drift,
                r.transitivity_drift, st);
  }
  if (runs.size() > 1) {
    std::printf("observed order (per halving):\n");
    for (size_t i = 0; i + 1 < runs.size(); ++i) {
      const double ratio = static_cast<double>(runs[i + 1].steps) / runs[i].steps;
      const double den = std::log2(ratio);
      auto ord = [&](double a, double b) { return (a > 0 && b > 0) ? std::log2(a / b) / den : 0.0; };
      std::printf("  %d -> %d:  K %.2f  alpha %.2f\n", runs[i].steps, runs[i + 1].steps,
                  ord(runs[i].K_drift, runs[i + 1].K_drift),
                  ord(runs[i].alpha_drift, runs[i + 1].alpha_drift));
    }
  }
  if (curve.closed && runs.back().status == fsgeo::TransportStatus::Ok) {
    const fsgeo::HolonomyReport rep =
        fsgeo::holonomy_report(*model, curve, y0s, runs.back().steps);
    std::printf("holonomy: alpha delta %.5e, K delta %.5e, vector deltas:", rep.alpha_delta,
                rep.K_delta);
    for (double d : rep.vector_delta) std::printf(" %.5e", d);
    std::printf("\n");
  }
  if (!out.empty()) {
    std::ofstream os(out, std::ios::binary);
    if (!os) throw fsgeo::ConfigError("cannot write: " + out);
    fsgeo::write_trajectory_csv(os, runs.back());
    std::cout << "trajectory written to " << out << "\n";
  }
  return runs.back().status == fsgeo::TransportStatus::Ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finsleroid connection verification suite"};
  app.require_subcommand(1);

  std::string config_path, out, format, curve_spec, steps_arg = "256";
  int vectors = 2;
  std::vector<std::string> suites;

  auto* check = app.add_subcommand("check", "run verification suites from a config");
  check->add_option("--config", config_path, "config file")->required();
  check->add_option("--suite", suites, "suite name (repeatable; default: all)");
  check->add_option("--out", out, "report output path");
  check->add_option("--format", format, "report format: json|csv");

  auto* transport = app.add_subcommand("transport", "transport vectors along a curve");
  transport->add_option("--config", config_path, "config file")->required();
  transport->add_option("--curve", curve_spec, "curve spec")->required();
  transport->add_option("--steps", steps_arg, "step counts, comma separated");
  transport->add_option("--vectors", vectors, "number of transported vectors");
  transport->add_option("--out", out, "trajectory csv path");

  try {
    app.parse(argc, argv);
    if (check->parsed()) return run_check(config_path, suites, out, format);
    if (transport->parsed()) return run_transport(config_path, curve_spec, steps_arg, vectors, out);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const fsgeo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const fsgeo::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
