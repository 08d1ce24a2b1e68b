#pragma once

// The Riemannian side: analytic metric and axis 1-form fields with closed-form
// coordinate derivatives, Christoffel symbols, curvature, and the linear
// transport operator. Four canonical models are shipped, all of the conformal
// shape a = e^{2 phi(x)} delta with b_i = c e^{phi} n_i(x), |n|_delta = 1,
// which keeps the norm constraint a^{ij} b_i b_j = c^2 exact.

#include <functional>
#include <memory>
#include <string>

#include "fsgeo/core.hpp"

namespace fsgeo {

class BackgroundModel {
 public:
  virtual ~BackgroundModel() = default;

  virtual int dim() const = 0;
  virtual double norm_c() const = 0;
  virtual double charge_g() const = 0;

  virtual Mat metric(const Vec& x) const = 0;
  virtual Ten3 metric_d1(const Vec& x) const = 0;   // (k,i,j) = d_k a_ij
  virtual Ten4 metric_d2(const Vec& x) const = 0;   // (k,l,i,j)
  virtual Ten5 metric_d3(const Vec& x) const = 0;   // (k,l,m,i,j)
  virtual Vec oneform(const Vec& x) const = 0;      // b_i
  virtual Mat oneform_d1(const Vec& x) const = 0;   // (k,i) = d_k b_i
  virtual Ten3 oneform_d2(const Vec& x) const = 0;  // (k,l,i)

  // False when metric_d3 is unavailable; derivative-of-curvature output is
  // then finite-differenced and marked FD-grade by callers.
  virtual bool analytic_d3() const { return true; }

  double degree_h() const {
    const double g = charge_g();
    return std::sqrt(1.0 - g * g / 4.0);
  }
};

struct ModelKnobs {
  double theta0 = 0.0;       // axis rotation offset
  Vec theta_k;               // axis rotation covector (empty -> default)
  double phi_amp = 0.0;      // sine conformal factor amplitude
  Vec phi_wave;              // sine wave covector
  Vec phi_lin;               // linear conformal term
  double curvature = 0.0;    // stereographic constant-curvature parameter
  int axis_i = 0, axis_j = 1;  // rotation plane of n(x)
};

class ConformalBackground final : public BackgroundModel {
 public:
  ConformalBackground(int dim, double c, double g, ModelKnobs knobs);

  int dim() const override { return n_; }
  double norm_c() const override { return c_; }
  double charge_g() const override { return g_; }

  Mat metric(const Vec& x) const override;
  Ten3 metric_d1(const Vec& x) const override;
  Ten4 metric_d2(const Vec& x) const override;
  Ten5 metric_d3(const Vec& x) const override;
  Vec oneform(const Vec& x) const override;
  Mat oneform_d1(const Vec& x) const override;
  Ten3 oneform_d2(const Vec& x) const override;

 private:
  double phi(const Vec& x) const;
  Vec phi_d1(const Vec& x) const;
  Mat phi_d2(const Vec& x) const;
  Ten3 phi_d3(const Vec& x) const;
  double theta(const Vec& x) const;
  Vec axis_n(const Vec& x) const;
  Mat axis_n_d1(const Vec& x) const;   // (k,i) = d_k n_i
  Ten3 axis_n_d2(const Vec& x) const;  // (k,l,i)

  int n_;
  double c_, g_;
  ModelKnobs kn_;
};

// Wrapper hiding third metric derivatives; exercises the FD fallback path.
class NoThirdDerivs final : public BackgroundModel {
 public:
  explicit NoThirdDerivs(std::shared_ptr<const BackgroundModel> inner) : m_(std::move(inner)) {}
  int dim() const override { return m_->dim(); }
  double norm_c() const override { return m_->norm_c(); }
  double charge_g() const override { return m_->charge_g(); }
  Mat metric(const Vec& x) const override { return m_->metric(x); }
  Ten3 metric_d1(const Vec& x) const override { return m_->metric_d1(x); }
  Ten4 metric_d2(const Vec& x) const override { return m_->metric_d2(x); }
  Ten5 metric_d3(const Vec&) const override { throw DomainError("metric_d3 unavailable"); }
  Vec oneform(const Vec& x) const override { return m_->oneform(x); }
  Mat oneform_d1(const Vec& x) const override { return m_->oneform_d1(x); }
  Ten3 oneform_d2(const Vec& x) const override { return m_->oneform_d2(x); }
  bool analytic_d3() const override { return false; }

 private:
  std::shared_ptr<const BackgroundModel> m_;
};

enum class CanonicalModel { FlatConstant, FlatRotating, ConformalRotating, ConstantCurvature };

CanonicalModel canonical_from_string(const std::string& s);
std::string canonical_name(CanonicalModel m);

std::shared_ptr<BackgroundModel> make_model(CanonicalModel which, int dim, double c, double g,
                                            const ModelKnobs& knobs = {});

// ---------------------------------------------------------------------------
// Derived Riemannian objects
// ---------------------------------------------------------------------------

Ten3 christoffel(const BackgroundModel& m, const Vec& x);                 // (i,k,n) = a^i_{kn}
Ten4 christoffel_d1(const BackgroundModel& m, const Vec& x);              // (m,i,k,n) = d_m a^i_{kn}
Ten4 riemann(const BackgroundModel& m, const Vec& x);                     // (n,i,k,m) = a_n^i_{km}
Ten4 riemann_lowered(const BackgroundModel& m, const Vec& x);             // (n,i,k,m) with i lowered
Ten5 riemann_nabla(const BackgroundModel& m, const Vec& x);               // (k,h,t,i,j) = nabla_k a_h^t_{ij}
Mat nabla_oneform(const BackgroundModel& m, const Vec& x);                // (i,m) = nabla_i b_m
Mat riem_transport_coeffs(const Ten3& gamma, const Vec& t);               // (k,i) = L^k_i = -a^k_{ih} t^h
double riemannian_angle(const Mat& a, const Vec& t1, const Vec& t2);

// Everything fiber code needs at a fixed base point.
struct PointFrame {
  Vec x;
  Mat a, ainv;
  Ten3 da;       // d_k a_ij
  Mat db;        // d_k b_i
  Ten3 gamma;    // a^i_{kn}
  Vec b_low, b_up, bt_low, bt_up;
  Mat nabla_b;   // (i,m) = nabla_i b_m
  double c = 1.0, g = 0.0, h = 1.0;
};

PointFrame point_frame(const BackgroundModel& m, const Vec& x);

struct CurvePath {
  std::function<Vec(double)> x;
  std::function<Vec(double)> xdot;
  bool closed = false;
};

CurvePath circle_path(const Vec& center, double radius, int axis_i, int axis_j);
CurvePath segment_path(const Vec& from, const Vec& to);

}  // namespace fsgeo
