#include "nls2d/diagnostics.hpp"

#include <cmath>
#include <filesystem>
#include <sstream>

#include "nls2d/io.hpp"

namespace nls2d {

namespace {

double h1_norm(GridPtr g, const Eigen::ArrayXcd& v) {
  const ComplexRadialField f{g, v};
  const double mass = integrate_volumes(*g, v.abs2());
  const double kin = grad_l2_sq(f);
  return std::sqrt(mass + kin);
}

}  // namespace

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::ScatteringConsistent: return "scattering-consistent";
    case Outcome::BlowUp: return "blow-up";
    case Outcome::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

int outcome_exit_code(Outcome o) {
  switch (o) {
    case Outcome::ScatteringConsistent: return 0;
    case Outcome::BlowUp: return 2;
    case Outcome::Inconclusive: return 3;
  }
  return 1;
}

std::vector<double> scattering_metric(const Trajectory& traj,
                                      double tail_start_fraction) {
  if (traj.blowup)
    throw InvalidArgument("scattering_metric: trajectory halted in blow-up");
  if (traj.times.size() < 3)
    throw InsufficientData("scattering_metric: need at least 3 snapshots");

  const double t_start = tail_start_fraction * traj.times.back();
  std::vector<std::size_t> tail;
  for (std::size_t k = 0; k < traj.times.size(); ++k)
    if (traj.times[k] >= t_start - 1e-12) tail.push_back(k);
  if (tail.size() < 3)
    throw InsufficientData("scattering_metric: fewer than 3 tail snapshots");

  // matched discrete operator and step so free motion is undone exactly
  LinearPropagateOptions opts;
  opts.dt = traj.dt;
  opts.refine = 1;

  std::vector<Eigen::ArrayXcd> back;
  back.reserve(tail.size());
  for (const std::size_t k : tail) {
    const ComplexRadialField v =
        linear_propagate(traj.state(k), -traj.times[k], opts);
    back.push_back(v.values);
  }
  std::vector<double> d;
  d.reserve(back.size() - 1);
  for (std::size_t j = 0; j + 1 < back.size(); ++j)
    d.push_back(h1_norm(traj.grid, (back[j + 1] - back[j]).eval()));
  return d;
}

double spacetime_2p_norm(const Trajectory& traj, double p) {
  if (traj.times.empty()) return 0.0;
  double acc = 0.0;
  double prev = integrate(*traj.grid, abs_pow(traj.snapshots[0], 2.0 * p));
  for (std::size_t k = 1; k < traj.times.size(); ++k) {
    const double cur = integrate(*traj.grid, abs_pow(traj.snapshots[k], 2.0 * p));
    acc += 0.5 * (prev + cur) * (traj.times[k] - traj.times[k - 1]);
    prev = cur;
  }
  return acc;
}

BlowupProbeResult blowup_probe(const ComplexRadialField& u0, double p,
                               const EvolveConfig& cfg) {
  EvolveConfig c = cfg;
  c.p = p;
  const Trajectory traj = evolve(u0, c);
  BlowupProbeResult out;
  out.flagged = traj.blowup;
  out.halt_time = traj.halt_time;
  out.growth_factor = traj.gradient_growth;
  return out;
}

namespace {

bool cauchy_decreasing(const std::vector<double>& d, double noise_floor) {
  if (d.size() < 2) return false;
  if (d.front() <= noise_floor) return true;  // already at solver noise
  std::size_t ok = 0;
  for (std::size_t k = 0; k + 1 < d.size(); ++k)
    if (d[k + 1] <= 1.1 * d[k] + noise_floor) ++ok;
  const bool mostly = 10 * ok >= 7 * (d.size() - 1);
  const bool net = d.back() <= 0.9 * d.front() + noise_floor;
  return mostly && net;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  namespace fs = std::filesystem;
  fs::create_directories(cfg.output_dir);

  GridPtr grid = make_grid(cfg.grid_r_max, cfg.grid_n);
  ComplexRadialField u0 = build_initial_data(cfg, grid);
  const GroundStateProfile gs = shoot_ground_state(cfg.p);

  ExperimentResult res;
  res.verdict.classification = classify(u0, cfg.p, gs);

  ComplexRadialField u_run = u0;
  if (res.verdict.classification.below && !res.verdict.classification.trivial &&
      norm_bundle(u0, cfg.p).energy > 0.0) {
    auto [scaled, lambda] = rescale_to_unit(u0, cfg.p);
    u_run = scaled;
    res.verdict.rescale_lambda = lambda;
  }

  EvolveConfig ecfg = cfg.evolve;
  ecfg.p = cfg.p;
  res.trajectory = evolve(u_run, ecfg);
  res.verdict.conservation =
      conservation_report(res.trajectory, cfg.boundary_mass_tol);
  res.verdict.l2p_spacetime = spacetime_2p_norm(res.trajectory, cfg.p);
  res.verdict.halt_time = res.trajectory.halt_time;

  std::ostringstream notes;

  if (!res.trajectory.blowup) {
    double R = cfg.morawetz_R;
    if (cfg.auto_R_factor > 0.0) {
      R = std::max(1.0, cfg.auto_R_factor * effective_radius(u_run));
      const double cap = 0.5 * grid->r_max - 4.0 * grid->h;
      if (R > cap) {
        R = cap;
        notes << "morawetz R capped by grid; ";
      }
    }
    try {
      res.morawetz = spacetime_estimate(res.trajectory, cfg.r_policy, cfg.p, R,
                                        cfg.fit_lo, cfg.fit_hi);
      res.have_morawetz = true;
    } catch (const InsufficientData& e) {
      notes << "morawetz skipped: " << e.what() << "; ";
    }
  }

  if (res.trajectory.blowup) {
    res.verdict.outcome = Outcome::BlowUp;
    notes << "gradient growth " << res.trajectory.gradient_growth << " at t="
          << res.trajectory.halt_time << "; ";
  } else {
    const auto& cons = res.verdict.conservation;
    const bool gates_ok = cons.max_mass_drift <= cfg.mass_drift_tol &&
                          cons.max_energy_drift <= cfg.energy_drift_tol &&
                          !cons.boundary_flagged;
    if (!gates_ok) {
      res.verdict.outcome = Outcome::Inconclusive;
      notes << "conservation gate failed (mass " << cons.max_mass_drift
            << ", energy " << cons.max_energy_drift << ", boundary "
            << cons.max_boundary_fraction << "); ";
    } else {
      try {
        res.verdict.scattering_cauchy =
            scattering_metric(res.trajectory, cfg.scattering_tail_fraction);
        double sum = 0.0;
        for (const double d : res.verdict.scattering_cauchy) sum += d;
        const double scale = norm_bundle(u_run, cfg.p).h1;
        res.verdict.scattering_sum = sum;
        res.verdict.scattering_tol = cfg.scattering_tol_factor * scale;
        const bool consistent =
            sum <= res.verdict.scattering_tol &&
            cauchy_decreasing(res.verdict.scattering_cauchy, 1e-10 * scale);
        res.verdict.outcome = consistent ? Outcome::ScatteringConsistent
                                         : Outcome::Inconclusive;
        if (!consistent)
          notes << "Cauchy increments not summable below tolerance; ";
      } catch (const InsufficientData& e) {
        res.verdict.outcome = Outcome::Inconclusive;
        notes << e.what() << "; ";
      }
    }
  }
  res.verdict.notes = notes.str();

  // emit series and summaries; partial outputs are kept on failure
  write_monitors_csv(cfg.output_dir + "/monitors.csv", res.trajectory);
  if (res.have_morawetz) {
    write_morawetz_csv(cfg.output_dir + "/morawetz.csv", res.morawetz);
    write_morawetz_json(cfg.output_dir + "/morawetz.json", res.morawetz);
  }
  if (cfg.snapshots == SnapshotOutput::Csv || cfg.snapshots == SnapshotOutput::Both)
    write_trajectory_csv(cfg.output_dir + "/snapshots.csv", res.trajectory);
  if (cfg.snapshots == SnapshotOutput::Binary || cfg.snapshots == SnapshotOutput::Both)
    write_trajectory_binary(cfg.output_dir + "/snapshots.bin", res.trajectory);
  write_text(cfg.output_dir + "/config.cfg", serialize_config(cfg));
  write_text(cfg.output_dir + "/summary.json", verdict_json(res.verdict));
  return res;
}

}  // namespace nls2d
