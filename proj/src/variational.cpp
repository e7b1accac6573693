#include "nls2d/variational.hpp"

#include <cmath>

namespace nls2d {

namespace {

// u_lambda(r) = lambda^(2/p) u(lambda r), resampled on the native grid
ComplexRadialField apply_scaling(const ComplexRadialField& u, double p,
                                 double lambda) {
  ComplexRadialField out;
  out.grid = u.grid;
  out.values = std::pow(lambda, 2.0 / p) * resample(u, u.grid->nodes * lambda);
  return out;
}

}  // namespace

ThresholdReport classify(const ComplexRadialField& u0, double p,
                         const GroundStateProfile& g) {
  ThresholdReport rep;
  const NormBundle nb = norm_bundle(u0, p);
  if (nb.mass == 0.0) {
    rep.trivial = true;
    rep.below = true;
    rep.me_ratio = 0.0;
    rep.kg_ratio = 0.0;
    rep.e0 = 0.0;
    return rep;
  }
  rep.kg_ratio =
      nb.mass * std::pow(nb.kinetic, 0.5 * (p - 2.0)) / g.threshold_kg;
  if (nb.energy < 0.0) {
    rep.me_applicable = false;
    rep.me_ratio = std::numeric_limits<double>::quiet_NaN();
    rep.below = false;
    return rep;
  }
  rep.me_ratio =
      nb.mass * nb.mass * std::pow(nb.energy, p - 2.0) / g.threshold_me;
  rep.below = rep.me_ratio < 1.0 && rep.kg_ratio < 1.0;
  if (nb.energy > 0.0) {
    try {
      auto [scaled, lambda] = rescale_to_unit(u0, p);
      (void)lambda;
      rep.e0 = norm_bundle(scaled, p).mass;
    } catch (const std::exception&) {
      rep.e0 = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return rep;
}

std::pair<ComplexRadialField, double> rescale_to_unit(
    const ComplexRadialField& u0, double p) {
  const NormBundle nb0 = norm_bundle(u0, p);
  if (!(nb0.energy > 0.0))
    throw NotRescalable("rescale_to_unit: energy must be positive");

  // log(M/E) decreases in log(lambda); bisect it to zero.  Degenerate
  // evaluations keep the right sign: a tiny lambda flattens the data (E <= 0,
  // ratio effectively +inf), a huge one empties the grid (ratio -> 0).
  auto log_ratio = [&](double loglam) {
    const ComplexRadialField v = apply_scaling(u0, p, std::exp(loglam));
    const NormBundle nb = norm_bundle(v, p);
    if (!(nb.mass > 0.0)) return -50.0;
    if (!(nb.energy > 0.0)) return 50.0;
    return std::log(nb.mass / nb.energy);
  };

  double lo = -20.0, hi = 20.0;
  double flo = log_ratio(lo);
  double fhi = log_ratio(hi);
  if (flo == 0.0) return {apply_scaling(u0, p, std::exp(lo)), std::exp(lo)};
  if (fhi == 0.0) return {apply_scaling(u0, p, std::exp(hi)), std::exp(hi)};
  if ((flo > 0.0) == (fhi > 0.0))
    throw NotRescalable("rescale_to_unit: no normalizing scale in e^[-20,20]");
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    const double fm = log_ratio(mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  const double lambda = std::exp(0.5 * (lo + hi));
  return {apply_scaling(u0, p, lambda), lambda};
}

double coercivity_margin(const ComplexRadialField& f, double p) {
  const NormBundle nb = norm_bundle(f, p);
  if (!(nb.potential > 0.0))
    throw UndefinedMargin("coercivity_margin: ||f||_{p+2} vanishes");
  return (nb.kinetic - (p / (p + 2.0)) * nb.potential) / nb.potential;
}

TrajectoryCoercivityReport coercivity_trajectory_check(
    const Trajectory& traj, double p, const GroundStateProfile& g,
    double delta) {
  TrajectoryCoercivityReport rep;
  rep.margins.reserve(traj.snapshots.size());
  rep.min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    const NormBundle& nb = traj.monitors[k];
    const double kg =
        nb.mass * std::pow(nb.kinetic, 0.5 * (p - 2.0)) / g.threshold_kg;
    const double margin = 1.0 - kg;
    rep.margins.push_back(margin);
    rep.min_margin = std::min(rep.min_margin, margin);
    if (kg >= 1.0) rep.violation = true;
  }
  if (!rep.margins.empty()) rep.initial_margin_ok = rep.margins.front() >= delta;
  return rep;
}

}  // namespace nls2d
