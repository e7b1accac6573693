#pragma once

#include <utility>

#include "nls2d/field.hpp"

namespace nls2d {

/// The positive decaying solution of Q'' + Q'/r - Q + Q^(p+1) = 0 sampled on
/// a grid, together with its variational constants.
struct GroundStateProfile {
  double p = 0.0;
  ComplexRadialField field;   // real-valued, positive, strictly decreasing
  double q0 = 0.0;            // Q(0), the accepted shooting parameter
  double c0 = 0.0;            // sharp Gagliardo-Nirenberg constant
  NormBundle norms;
  double threshold_me = 0.0;  // M(Q)^2 E(Q)^(p-2)
  double threshold_kg = 0.0;  // ||Q||^2 ||grad Q||^(p-2)
  double graft_radius = std::numeric_limits<double>::quiet_NaN();
};

GridPtr default_ground_state_grid();

/// Shooting solver: scans Q(0) in {1.0, 1.5, ..., 8.0} for an
/// (undershoot, overshoot) bracket, bisects it below `tol` (and in practice
/// to near machine precision), integrates the accepted profile onto `grid`
/// and grafts the e^{-r}/sqrt(r) tail beyond the trust radius.
/// Requires p >= 2 and tol in (0, 1e-6].
GroundStateProfile shoot_ground_state(double p, double tol = 1e-12,
                                      GridPtr grid = nullptr);

/// (rho1, rho2): relative defects of the two Pohozaev identities.
std::pair<double, double> pohozaev_residuals(const GroundStateProfile& g);

/// C0 from the threshold product, (p+2) / (p ||Q||^2 ||grad Q||^(p-2)).
double gn_constant(const GroundStateProfile& g);

/// C0 from the direct ratio ||Q||_{p+2}^{p+2} / (||Q||^2 ||grad Q||^p);
/// agrees with gn_constant up to the Pohozaev defects.
double gn_constant_direct(const GroundStateProfile& g);

/// (threshold_me, threshold_kg).
std::pair<double, double> threshold_quantities(const GroundStateProfile& g);

/// Relative gap between the quadrature value of M(Q)^2 E(Q)^(p-2) and its
/// closed form ((p-2)/(2p))^(p-2) ((p+2)/p)^2 / C0^2.
double threshold_identity_error(const GroundStateProfile& g);

/// Max interior defect of the profile in the discrete elliptic equation.
double ode_residual(const GroundStateProfile& g);

}  // namespace nls2d
