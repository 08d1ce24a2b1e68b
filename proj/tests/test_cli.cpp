#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "fsgeo/config.hpp"
#include "fsgeo/report.hpp"
#include "fsgeo/suites.hpp"

using namespace fsgeo;

namespace {

std::string write_temp_config(const std::string& body) {
  static int counter = 0;
  std::string path = "cfg_test_" + std::to_string(counter++) + ".cfg";
  std::ofstream os(path);
  os << body;
  return path;
}

const char* kGood = R"(# comment
[model]
type = ii
dim = 3
c = 1.0
g = 0.6
theta_k = 0.3 0.2 0.1

[run]
seed = 7
samples = 4
suites = metric angle

[output]
format = json

[tolerances]
analytic = 1e-8
fd = 1e-6
)";

}  // namespace

TEST_CASE("config parsing and validation") {
  const std::string path = write_temp_config(kGood);
  const SuiteConfig cfg = load_config(path);
  CHECK(cfg.model_id == "ii");
  CHECK(cfg.dim == 3);
  CHECK(cfg.g == 0.6);
  CHECK(cfg.seed == 7);
  CHECK(cfg.samples == 4);
  REQUIRE(cfg.suites.size() == 2);
  CHECK(cfg.suites[0] == "metric");
  CHECK(cfg.knobs.theta_k == Vec{0.3, 0.2, 0.1});
  std::remove(path.c_str());
}

TEST_CASE("invalid configs are rejected before anything runs") {
  SuiteConfig cfg;
  cfg.g = 2.5;
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);
  cfg.g = 0.5;
  cfg.c = 0.0;
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);
  cfg.c = 1.0;
  cfg.dim = 2;
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);
  cfg.dim = 3;
  cfg.samples = 0;
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);
  cfg.samples = 1;
  cfg.format = "xml";
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);

  const std::string bad = write_temp_config("[model]\nwhat = 3\n");
  CHECK_THROWS_AS(load_config(bad), ConfigError);
  std::remove(bad.c_str());
  CHECK_THROWS_AS(load_config("definitely_missing.cfg"), ConfigError);

  SuiteConfig unknown;
  unknown.suites = {"nonsense"};
  CHECK_THROWS_AS(run_suites(unknown), ConfigError);
}

TEST_CASE("curve specs") {
  const CurvePath c = parse_curve("circle:center=0.1,0,0:radius=0.4:plane=0,2", 3);
  CHECK(c.closed);
  CHECK(c.x(0.0)[0] == doctest::Approx(0.5));
  CHECK(c.x(0.25)[2] == doctest::Approx(0.4));
  const CurvePath s = parse_curve("segment:from=0,0,0:to=1,2,3", 3);
  CHECK_FALSE(s.closed);
  CHECK(s.x(0.5) == Vec{0.5, 1.0, 1.5});
  CHECK_THROWS_AS(parse_curve("spiral:radius=1", 3), ConfigError);
  CHECK_THROWS_AS(parse_curve("circle:center=0,0:radius=1:plane=0,1", 3), ConfigError);
  CHECK_THROWS_AS(parse_curve("circle:center=0,0,0:radius=1:plane=0,0", 3), ConfigError);
}

TEST_CASE("identical config and seed produce byte-identical reports") {
  SuiteConfig cfg;
  cfg.model_id = "iii";
  cfg.samples = 5;
  cfg.seed = 99;
  cfg.suites = {"metric", "automorphism", "indicatrix"};
  const ResidualReport a = run_suites(cfg);
  const ResidualReport b = run_suites(cfg);
  std::ostringstream ja, jb, ca, cb;
  write_json(a, ja);
  write_json(b, jb);
  write_csv(a, ca);
  write_csv(b, cb);
  CHECK(ja.str() == jb.str());
  CHECK(ca.str() == cb.str());
  CHECK(ja.str().find("\"all_pass\": true") != std::string::npos);
  // a different seed moves the numbers
  cfg.seed = 100;
  std::ostringstream jc;
  write_json(run_suites(cfg), jc);
  CHECK(ja.str() != jc.str());
}

TEST_CASE("rows are ordered by module and named checks carry anchors") {
  SuiteConfig cfg;
  cfg.model_id = "ii";
  cfg.samples = 3;
  cfg.suites = {"angle", "metric"};  // request order must not matter
  const ResidualReport rep = run_suites(cfg);
  REQUIRE(!rep.rows.empty());
  CHECK(rep.rows.front().module == "metric");
  CHECK(rep.rows.back().module == "angle");
  for (const auto& r : rep.rows) {
    CHECK(r.anchor == r.module + "/" + r.name);
    CHECK(r.samples > 0);
    CHECK(r.tolerance > 0.0);
  }
}

TEST_CASE("csv shape") {
  SuiteConfig cfg;
  cfg.model_id = "i";
  cfg.samples = 2;
  cfg.suites = {"metric"};
  const ResidualReport rep = run_suites(cfg);
  std::ostringstream os;
  write_csv(rep, os);
  std::istringstream is(os.str());
  std::string header;
  std::getline(is, header);
  CHECK(header == "module,name,anchor,grade,samples,max_residual,tolerance,pass,worst_x,worst_y");
  size_t rows = 0;
  std::string line;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == rep.rows.size());
}
