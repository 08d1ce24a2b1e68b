#pragma once

// Curvature apparatus built from commutators of the covariant derivative:
// the M, E and rho tensors, the T-form, their transitivity to the background
// Riemann tensor, and the derived identities. Index conventions:
//   M(n,i,j)        = M^n_{ij}
//   E(k,n,i,j)      = E_k^n_{ij}
//   rho(k,n,i,j)    = rho_k^n_{ij}
//   T(k,n,h,m)      = T_kn^{hm}
//   riem(n,i,k,m)   = a_n^i_{km}
// Lowering the second slot of riem uses a_{hlij} = a_{lr} a_h^r_{ij}.

#include <vector>

#include "fsgeo/background.hpp"
#include "fsgeo/connection.hpp"
#include "fsgeo/core.hpp"
#include "fsgeo/finsleroid.hpp"

namespace fsgeo {

struct CurvatureData {
  Ten3 M;
  Ten4 E;
  Ten4 rho;
  Ten4 T;
  Ten4 rho_low;  // rho_{knij}
  Ten3 M_low;    // M_{nij}
};

// Analytic (transitive-route) assembly of the full apparatus.
CurvatureData curvature_data(const BackgroundModel& model, const Vec& x, const Vec& y);

Ten3 m_transitive(const PointFrame& pf, const Ten4& riem, const Vec& y);
Ten3 m_definition(const BackgroundModel& model, const Vec& x, const Vec& y);  // x-differenced
Ten3 m_finsleroid_closed(const PointFrame& pf, const Ten4& riem, const Vec& y);  // c = 1
Ten4 e_jet(const PointFrame& pf, const Ten4& riem, const Vec& y);
Ten4 e_definition(const BackgroundModel& model, const Vec& x, const Vec& y);  // x-differenced
Ten4 e_transitive(const PointFrame& pf, const Ten4& riem, const Vec& y);
Ten4 rho_closed(const PointFrame& pf, const Ten4& riem, const Vec& y);
Ten4 t_tensor(const PointFrame& pf, const Vec& y);
Ten4 rho_from_t(const PointFrame& pf, const Ten4& riem, const Vec& y);

struct CurvatureResiduals {
  double m_routes = 0;        // x-differenced definition vs transitive
  double m_closed = 0;        // axis-form closed expression (c = 1)
  double m_contraction = 0;   // y_n M^n_{ij}
  double e_routes_def = 0;    // definition vs fiber-jet route
  double e_routes_trans = 0;  // transitive form vs fiber-jet route
  double e_contr_yk = 0;      // y^k E_k = -M
  double e_contr_yn = 0;      // y_n E^n = M_low
  double e_sym = 0;           // symmetric part vs Cartan contraction
  double rho_routes_def = 0;  // commutator definition vs closed form
  double rho_routes_T = 0;    // T-form vs closed form
  double rho_skew = 0;        // skew symmetries after lowering
  double rho_sq = 0;          // squared-norm relation
  double m_sq_closed = 0;     // axis-form squared contraction (c = 1)
  double raise_consistency = 0;
  double commutator = 0;      // derivative commutator on a test tensor
  double transit_deriv = 0;   // covariant derivative transitivity
  double cyclic_m = 0;
  double cyclic_rho = 0;
  double dT = 0;
  double max_fd() const { return std::max({m_routes, e_routes_def, rho_routes_def, commutator}); }
  double max_analytic() const {
    return std::max({m_contraction, e_routes_trans, e_contr_yk, e_contr_yn, e_sym, rho_routes_T,
                     rho_skew, rho_sq, raise_consistency, cyclic_m, cyclic_rho, dT, transit_deriv});
  }
};

CurvatureResiduals curvature_residuals(const BackgroundModel& model, const Vec& x, const Vec& y);

}  // namespace fsgeo
