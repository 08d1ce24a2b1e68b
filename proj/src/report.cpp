#include "fsgeo/report.hpp"

#include <cstdio>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace fsgeo {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join(const Vec& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += " ";
    s += fmt(v[i]);
  }
  return s;
}

}  // namespace

void write_json(const ResidualReport& rep, std::ostream& os) {
  nlohmann::ordered_json j;
  j["model"] = rep.info.model;
  j["dim"] = rep.info.dim;
  j["c"] = rep.info.c;
  j["g"] = rep.info.g;
  j["seed"] = rep.info.seed;
  j["samples"] = rep.info.samples;
  j["all_pass"] = rep.all_pass();
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& r : rep.rows) {
    nlohmann::ordered_json row;
    row["module"] = r.module;
    row["name"] = r.name;
    row["anchor"] = r.anchor;
    row["grade"] = r.grade;
    row["samples"] = r.samples;
    row["max_residual"] = fmt(r.max_residual);
    row["tolerance"] = fmt(r.tolerance);
    row["pass"] = r.pass;
    row["worst_x"] = join(r.worst_x);
    row["worst_y"] = join(r.worst_y);
    j["checks"].push_back(row);
  }
  os << j.dump(2) << "\n";
}

void write_csv(const ResidualReport& rep, std::ostream& os) {
  os << "module,name,anchor,grade,samples,max_residual,tolerance,pass,worst_x,worst_y\n";
  for (const auto& r : rep.rows) {
    os << r.module << "," << r.name << "," << r.anchor << "," << r.grade << "," << r.samples << ","
       << fmt(r.max_residual) << "," << fmt(r.tolerance) << "," << (r.pass ? "1" : "0") << ",\""
       << join(r.worst_x) << "\",\"" << join(r.worst_y) << "\"\n";
  }
}

std::string summary_text(const ResidualReport& rep) {
  std::ostringstream os;
  for (const auto& r : rep.rows) {
    char line[256];
    std::snprintf(line, sizeof line, "%-4s %-34s %4d samples  max %.3e  tol %.0e  [%s]\n",
                  r.pass ? "ok" : "FAIL", r.anchor.c_str(), r.samples, r.max_residual, r.tolerance,
                  r.grade.c_str());
    os << line;
  }
  os << (rep.all_pass() ? "all checks passed" : "CHECK FAILURES PRESENT") << "\n";
  return os.str();
}

}  // namespace fsgeo
