#pragma once

#include <vector>

#include "nls2d/evolve.hpp"
#include "nls2d/ground_state.hpp"

namespace nls2d {

/// Localization weights phi(x/R), psi(x/R) and their derivative profiles.
///
/// phi is 1 on [0,1], 0 beyond 2, and a fixed C^3 smoothstep in between;
/// psi(y) = (1/y) int_0^y phi.  All arrays hold samples of the profile
/// functions at y_k = r_k / R (derivatives are with respect to y; consumers
/// scale by 1/R per derivative order).  psi_d is derived from the identity
/// y psi'(y) = phi(y) - psi(y), which therefore holds exactly.
struct WeightPair {
  double R = 1.0;
  GridPtr grid;
  Eigen::ArrayXd phi;
  Eigen::ArrayXd psi;
  Eigen::ArrayXd phi_d;
  Eigen::ArrayXd phi_dd;
  Eigen::ArrayXd psi_d;
  Eigen::ArrayXd psi_dd;
  Eigen::ArrayXd chi_lap_chi;  // chi * Laplacian(chi) profile, chi = sqrt(phi)
};

/// Scalar profile evaluators for the fixed smoothstep (exposed for tests).
double weight_phi(double y);
double weight_phi_d(double y);
double weight_phi_dd(double y);
double weight_psi(double y);

/// Requires R >= 1 and 2R < r_max (otherwise the weights would truncate).
WeightPair make_weights(double R, GridPtr grid);

/// A(t) = int psi(x/R) x . Im[conj(u) grad u] dx.
double morawetz_action(const ComplexRadialField& u, const WeightPair& w);

struct RateTerms {
  double gradient_term = 0.0;    // 2 int phi |grad u|^2
  double potential_term = 0.0;   // p/(p+2) int (psi+phi) |u|^(p+2)
  double error_budget = 0.0;     // |curvature_term| + radial Sobolev tail bound
  double curvature_term = 0.0;   // exact weight-curvature contribution to dA/dt
  double rate = 0.0;             // gradient - potential + curvature (exact dA/dt)
  double rate_coercive = 0.0;    // 2 int phi [|grad u|^2 - p/(p+2)|u|^(p+2)]
  double tail_bound = 0.0;
};

RateTerms rate_decomposition(const ComplexRadialField& u, const WeightPair& w,
                             double p);

struct LocalizedCoercivityReport {
  double l2_localized = 0.0;       // ||chi_R u||_2^2
  double h1_localized = 0.0;       // ||chi_R u||_{H1-dot}^2 (commutator-corrected)
  double kg_ratio_localized = 0.0;
  double margin = 0.0;             // 1 - kg_ratio_localized
  double commutator = 0.0;         // int chi Lap[chi] |u|^2
  double commutator_bound = 0.0;   // c mass / R^2 with the frozen profile constant
};

LocalizedCoercivityReport coercive_lower_bound_check(
    const ComplexRadialField& u, const WeightPair& w, double p,
    const GroundStateProfile& g);

enum class RPolicy { Fixed, Scaling };

struct MorawetzSeries {
  std::vector<double> times;
  std::vector<double> action;
  std::vector<double> rate_fd;
  std::vector<double> rate_coercive;
  std::vector<double> rate_exact;
  std::vector<double> rate_error_budget;
  std::vector<double> local_potential;   // int_{|x| <= R/2} |u|^(p+2)
  std::vector<double> cumulative_spacetime;
  std::vector<double> R_used;
  double spacetime_potential = 0.0;      // int_0^T int |u|^(p+2)
  double sigma = 0.0;
  double alpha_theory = 0.0;
  double alpha_fitted = 0.0;
  double eta_measured = 0.0;
  double c_action_bound = 0.0;
  double e0 = 0.0;
};

/// Accumulates the Morawetz series along a trajectory.  R_fixed is used by
/// the fixed policy; the scaling policy takes R = max(1, t^(1/(1+sigma))),
/// capped below r_max/2.  The growth exponent of the cumulative space-time
/// potential is fitted by least squares on log-log over
/// [fit_lo * T, fit_hi * T].
MorawetzSeries spacetime_estimate(const Trajectory& traj, RPolicy policy,
                                  double p, double R_fixed = 8.0,
                                  double fit_lo = 0.25, double fit_hi = 1.0);

}  // namespace nls2d
