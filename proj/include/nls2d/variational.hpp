#pragma once

#include <vector>

#include "nls2d/evolve.hpp"
#include "nls2d/ground_state.hpp"

namespace nls2d {

/// Evaluation of the two sub-threshold conditions for given initial data.
struct ThresholdReport {
  double me_ratio = 0.0;  // M(u)^2 E(u)^(p-2) over the ground-state product
  double kg_ratio = 0.0;  // ||u||^2 ||grad u||^(p-2) over the same for Q
  bool below = false;
  double e0 = std::numeric_limits<double>::quiet_NaN();  // M = E after rescaling
  bool me_applicable = true;  // false when E(u0) < 0
  bool trivial = false;       // u0 == 0, below by convention
};

ThresholdReport classify(const ComplexRadialField& u0, double p,
                         const GroundStateProfile& g);

/// Rescales u -> lambda^(2/p) u(lambda x) so that M = E, via bisection on
/// log(lambda) in [-20, 20].  Requires E(u0) > 0.  Returns the rescaled
/// field and lambda.
std::pair<ComplexRadialField, double> rescale_to_unit(
    const ComplexRadialField& u0, double p);

/// Achieved coercivity constant (||grad f||^2 - p/(p+2) ||f||_{p+2}^{p+2})
/// normalized by ||f||_{p+2}^{p+2}.
double coercivity_margin(const ComplexRadialField& f, double p);

struct TrajectoryCoercivityReport {
  double min_margin = 0.0;  // min over snapshots of 1 - kg_ratio
  bool violation = false;   // some snapshot reached kg_ratio >= 1
  bool initial_margin_ok = true;
  std::vector<double> margins;
};

TrajectoryCoercivityReport coercivity_trajectory_check(
    const Trajectory& traj, double p, const GroundStateProfile& g,
    double delta);

}  // namespace nls2d
