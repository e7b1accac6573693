#pragma once

#include <string>

#include "nls2d/config.hpp"
#include "nls2d/variational.hpp"

namespace nls2d {

enum class Outcome { ScatteringConsistent, BlowUp, Inconclusive };

const char* outcome_name(Outcome o);
int outcome_exit_code(Outcome o);  // 0 scattering-consistent, 2 blow-up, 3 inconclusive

/// H^1 increments of back-propagated tail snapshots,
/// d_k = || exp(-i t_{k+1} Lap) u(t_{k+1}) - exp(-i t_k Lap) u(t_k) ||_{H^1}.
/// Back-propagation uses the trajectory's own discrete operator and step so
/// that free evolution is undone exactly.  Needs >= 3 tail snapshots.
std::vector<double> scattering_metric(const Trajectory& traj,
                                      double tail_start_fraction = 0.5);

/// Time quadrature of int |u|^{2p} dx along the trajectory.
double spacetime_2p_norm(const Trajectory& traj, double p);

struct BlowupProbeResult {
  bool flagged = false;
  double halt_time = std::numeric_limits<double>::quiet_NaN();
  double growth_factor = 1.0;  // max ||grad u|| / ||grad u0||
};

BlowupProbeResult blowup_probe(const ComplexRadialField& u0, double p,
                               const EvolveConfig& cfg);

struct VerdictReport {
  ThresholdReport classification;
  Outcome outcome = Outcome::Inconclusive;
  std::vector<double> scattering_cauchy;
  double l2p_spacetime = 0.0;
  std::string notes;
  ConservationReport conservation;
  double scattering_sum = std::numeric_limits<double>::quiet_NaN();
  double scattering_tol = std::numeric_limits<double>::quiet_NaN();
  double halt_time = std::numeric_limits<double>::quiet_NaN();
  double rescale_lambda = 1.0;
};

struct ExperimentResult {
  VerdictReport verdict;
  Trajectory trajectory;
  MorawetzSeries morawetz;
  bool have_morawetz = false;
};

/// Full pipeline: classify, rescale sub-threshold data to M = E, evolve,
/// accumulate the Morawetz series, decide the verdict, and emit all series
/// and summaries under cfg.output_dir.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace nls2d
