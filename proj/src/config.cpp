#include "fsgeo/config.hpp"

#include <fstream>
#include <sstream>

namespace fsgeo {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

Vec parse_vec(const std::string& s, char sep = ' ') {
  Vec out;
  std::string tok;
  std::istringstream is(s);
  while (std::getline(is, tok, sep)) {
    tok = trim(tok);
    if (tok.empty()) continue;
    size_t idx = 0;
    out.push_back(std::stod(tok, &idx));
    if (idx != tok.size()) throw ConfigError("bad number: " + tok);
  }
  return out;
}

double parse_num(const std::string& s) {
  size_t idx = 0;
  const double v = std::stod(s, &idx);
  if (idx != trim(s).size()) throw ConfigError("bad number: " + s);
  return v;
}

}  // namespace

SuiteConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  SuiteConfig cfg;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("bad section header at line " + std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value at line " + std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    try {
      if (section == "model") {
        if (key == "type")
          cfg.model_id = val;
        else if (key == "dim")
          cfg.dim = static_cast<int>(parse_num(val));
        else if (key == "c")
          cfg.c = parse_num(val);
        else if (key == "g")
          cfg.g = parse_num(val);
        else if (key == "theta_k")
          cfg.knobs.theta_k = parse_vec(val);
        else if (key == "theta0")
          cfg.knobs.theta0 = parse_num(val);
        else if (key == "phi_amp")
          cfg.knobs.phi_amp = parse_num(val);
        else if (key == "phi_wave")
          cfg.knobs.phi_wave = parse_vec(val);
        else if (key == "phi_lin")
          cfg.knobs.phi_lin = parse_vec(val);
        else if (key == "curvature")
          cfg.knobs.curvature = parse_num(val);
        else
          throw ConfigError("unknown model key: " + key);
      } else if (section == "run") {
        if (key == "seed")
          cfg.seed = static_cast<std::uint64_t>(std::stoull(val));
        else if (key == "samples")
          cfg.samples = static_cast<int>(parse_num(val));
        else if (key == "suites") {
          std::istringstream is(val);
          std::string tok;
          cfg.suites.clear();
          while (is >> tok) cfg.suites.push_back(tok);
        } else if (key == "x_lo")
          cfg.x_lo = parse_num(val);
        else if (key == "x_hi")
          cfg.x_hi = parse_num(val);
        else
          throw ConfigError("unknown run key: " + key);
      } else if (section == "output") {
        if (key == "path")
          cfg.out_path = val;
        else if (key == "format")
          cfg.format = val;
        else
          throw ConfigError("unknown output key: " + key);
      } else if (section == "tolerances") {
        if (key == "analytic")
          cfg.tol_analytic = parse_num(val);
        else if (key == "fd")
          cfg.tol_fd = parse_num(val);
        else
          throw ConfigError("unknown tolerance key: " + key);
      } else {
        throw ConfigError("unknown section: [" + section + "]");
      }
    } catch (const std::invalid_argument&) {
      throw ConfigError("bad value at line " + std::to_string(lineno));
    }
  }
  validate_config(cfg);
  return cfg;
}

void validate_config(const SuiteConfig& cfg) {
  if (cfg.dim < 3) throw ConfigError("dim must be >= 3");
  if (!(cfg.g > -2.0 && cfg.g < 2.0)) throw ConfigError("g out of (-2,2)");
  if (!(cfg.c > 0.0 && cfg.c <= 1.0)) throw ConfigError("c out of (0,1]");
  if (cfg.samples < 1) throw ConfigError("samples must be >= 1");
  if (cfg.format != "json" && cfg.format != "csv") throw ConfigError("format must be json or csv");
  if (!(cfg.x_lo < cfg.x_hi)) throw ConfigError("x box is empty");
  canonical_from_string(cfg.model_id);
}

CurvePath parse_curve(const std::string& spec, int dim) {
  std::istringstream is(spec);
  std::string kind;
  if (!std::getline(is, kind, ':')) throw ConfigError("empty curve spec");
  Vec center(dim, 0.0), from(dim, 0.0), to(dim, 0.0);
  double radius = 0.5;
  int pi = 0, pj = 1;
  bool have_to = false;
  std::string part;
  while (std::getline(is, part, ':')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw ConfigError("bad curve field: " + part);
    const std::string key = trim(part.substr(0, eq));
    const std::string val = trim(part.substr(eq + 1));
    if (key == "center")
      center = parse_vec(val, ',');
    else if (key == "radius")
      radius = parse_num(val);
    else if (key == "plane") {
      const Vec p = parse_vec(val, ',');
      if (p.size() != 2) throw ConfigError("plane needs two indices");
      pi = static_cast<int>(p[0]);
      pj = static_cast<int>(p[1]);
    } else if (key == "from")
      from = parse_vec(val, ',');
    else if (key == "to") {
      to = parse_vec(val, ',');
      have_to = true;
    } else
      throw ConfigError("unknown curve field: " + key);
  }
  if (kind == "circle") {
    if (static_cast<int>(center.size()) != dim) throw ConfigError("circle center has wrong size");
    if (pi < 0 || pj < 0 || pi >= dim || pj >= dim || pi == pj) throw ConfigError("bad plane");
    return circle_path(center, radius, pi, pj);
  }
  if (kind == "segment") {
    if (!have_to) throw ConfigError("segment needs to=");
    if (static_cast<int>(from.size()) != dim || static_cast<int>(to.size()) != dim)
      throw ConfigError("segment endpoints have wrong size");
    return segment_path(from, to);
  }
  throw ConfigError("unknown curve kind: " + kind);
}

}  // namespace fsgeo
