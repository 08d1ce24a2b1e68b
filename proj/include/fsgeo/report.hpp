#pragma once

// Machine-readable residual reports. Every check carries a stable anchor id
// (module/check-name), its sample count, worst residual, tolerance, grade
// (analytic vs x-differenced budget) and the coordinates of the worst
// sample. Serialization is deterministic: same rows in, same bytes out.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fsgeo/core.hpp"

namespace fsgeo {

struct CheckRow {
  std::string module;
  std::string name;
  std::string anchor;
  std::string grade;  // "analytic" | "fd"
  int samples = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  Vec worst_x, worst_y;
};

struct RunInfo {
  std::string model;
  int dim = 0;
  double c = 1.0, g = 0.0;
  std::uint64_t seed = 0;
  int samples = 0;
};

struct ResidualReport {
  RunInfo info;
  std::vector<CheckRow> rows;
  bool all_pass() const {
    for (const auto& r : rows)
      if (!r.pass) return false;
    return true;
  }
};

void write_json(const ResidualReport& rep, std::ostream& os);
void write_csv(const ResidualReport& rep, std::ostream& os);
std::string summary_text(const ResidualReport& rep);

// Residual accumulator tracking the worst sample.
class CheckAcc {
 public:
  CheckAcc(std::string module, std::string name, std::string grade, double tol)
      : module_(std::move(module)), name_(std::move(name)), grade_(std::move(grade)), tol_(tol) {}

  void update(double residual, const Vec& x, const Vec& y) {
    ++count_;
    if (residual > worst_) {
      worst_ = residual;
      wx_ = x;
      wy_ = y;
    }
  }

  CheckRow row() const {
    CheckRow r;
    r.module = module_;
    r.name = name_;
    r.anchor = module_ + "/" + name_;
    r.grade = grade_;
    r.samples = count_;
    r.max_residual = worst_;
    r.tolerance = tol_;
    r.pass = worst_ < tol_;
    r.worst_x = wx_;
    r.worst_y = wy_;
    return r;
  }

 private:
  std::string module_, name_, grade_;
  double tol_;
  int count_ = 0;
  double worst_ = 0.0;
  Vec wx_, wy_;
};

}  // namespace fsgeo
