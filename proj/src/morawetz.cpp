#include "nls2d/morawetz.hpp"

#include <cmath>

namespace nls2d {

namespace {

// smoothstep S with S(0)=0, S(1)=1 and three vanishing derivatives at both ends
inline double smoothstep(double s) {
  return s * s * s * s * (35.0 - 84.0 * s + 70.0 * s * s - 20.0 * s * s * s);
}
inline double smoothstep_d(double s) {
  const double t = 1.0 - s;
  return 140.0 * s * s * s * t * t * t;
}
inline double smoothstep_dd(double s) {
  const double t = 1.0 - s;
  return 420.0 * s * s * t * t * (1.0 - 2.0 * s);
}
// int_0^s S
inline double smoothstep_int(double s) {
  const double s5 = s * s * s * s * s;
  return s5 * (7.0 - 14.0 * s + 10.0 * s * s - 2.5 * s * s * s);
}

// max |chi Lap chi| of the profile, frozen from the fixed smoothstep
constexpr double kChiLapChiBound = 4.7475;

}  // namespace

double weight_phi(double y) {
  if (y <= 1.0) return 1.0;
  if (y >= 2.0) return 0.0;
  return 1.0 - smoothstep(y - 1.0);
}

double weight_phi_d(double y) {
  if (y <= 1.0 || y >= 2.0) return 0.0;
  return -smoothstep_d(y - 1.0);
}

double weight_phi_dd(double y) {
  if (y <= 1.0 || y >= 2.0) return 0.0;
  return -smoothstep_dd(y - 1.0);
}

double weight_psi(double y) {
  if (y <= 0.0) return 1.0;
  if (y <= 1.0) return 1.0;  // (1/y) * y
  if (y >= 2.0) return 1.5 / y;
  return (y - smoothstep_int(y - 1.0)) / y;
}

WeightPair make_weights(double R, GridPtr grid) {
  if (!(R >= 1.0)) throw InvalidArgument("make_weights: R must be >= 1");
  if (!(2.0 * R < grid->r_max))
    throw WeightOverflow("make_weights: need 2R < r_max");

  WeightPair w;
  w.R = R;
  w.grid = grid;
  const Eigen::Index n = grid->n;
  w.phi.resize(n);
  w.psi.resize(n);
  w.phi_d.resize(n);
  w.phi_dd.resize(n);
  w.psi_d.resize(n);
  w.psi_dd.resize(n);
  w.chi_lap_chi.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double y = grid->nodes(k) / R;
    const double phi = weight_phi(y);
    const double psi = weight_psi(y);
    const double phid = weight_phi_d(y);
    w.phi(k) = phi;
    w.psi(k) = psi;
    w.phi_d(k) = phid;
    w.phi_dd(k) = weight_phi_dd(y);
    w.psi_d(k) = (phi - psi) / y;            // identity y psi' = phi - psi
    w.psi_dd(k) = (phid - 2.0 * w.psi_d(k)) / y;
    if (phi > 1e-13 && phi < 1.0) {
      w.chi_lap_chi(k) = 0.5 * w.phi_dd(k) - phid * phid / (4.0 * phi) +
                         phid / (2.0 * y);
    } else {
      w.chi_lap_chi(k) = 0.0;  // flat regions, and the C^1 zero at phi -> 0
    }
  }
  return w;
}

double morawetz_action(const ComplexRadialField& u, const WeightPair& w) {
  const Eigen::ArrayXcd du = radial_derivative(*u.grid, u.values);
  const Eigen::ArrayXd density =
      (u.values.conjugate() * du).imag() * u.grid->nodes * w.psi;
  return integrate(*u.grid, density);
}

RateTerms rate_decomposition(const ComplexRadialField& u, const WeightPair& w,
                             double p) {
  const auto& g = *u.grid;
  const double R = w.R;
  const Eigen::ArrayXd grad2 =
      radial_derivative(g, u.values).abs2();
  const Eigen::ArrayXd udens = abs_pow(u.values, p + 2.0);
  const Eigen::ArrayXd u2 = u.values.abs2();

  RateTerms out;
  out.gradient_term = 2.0 * integrate(g, (w.phi * grad2).eval());
  out.potential_term =
      (p / (p + 2.0)) * integrate(g, ((w.psi + w.phi) * udens).eval());
  out.rate_coercive =
      2.0 * integrate(g, (w.phi * (grad2 - (p / (p + 2.0)) * udens)).eval());

  // exact curvature terms: -(1/2R^2) int phi''(y)|u|^2 dx
  //                        -(1/2R) int (2 phi'(y) - psi'(y)) |u|^2 / r dx
  const double c1 = integrate(g, (w.phi_dd * u2).eval());
  const double c2 = integrate(g, ((2.0 * w.phi_d - w.psi_d) * u2 / g.nodes).eval());
  out.curvature_term = -c1 / (2.0 * R * R) - c2 / (2.0 * R);

  out.rate = out.gradient_term - out.potential_term + out.curvature_term;

  const NormBundle nb = norm_bundle(u, p);
  double tail = 0.0;
  if (nb.mass > 0.0) {
    const double s = radial_sobolev_ratio(u);
    tail = (p / (p + 2.0)) * 1.5 * std::pow(R, -0.5 * p) *
           std::pow(s * nb.h1, p) * nb.mass;
  }
  out.tail_bound = tail;
  out.error_budget = std::abs(out.curvature_term) + tail;
  return out;
}

LocalizedCoercivityReport coercive_lower_bound_check(
    const ComplexRadialField& u, const WeightPair& w, double p,
    const GroundStateProfile& g) {
  const auto& grid = *u.grid;
  const Eigen::ArrayXd grad2 = radial_derivative(grid, u.values).abs2();
  const Eigen::ArrayXd u2 = u.values.abs2();

  LocalizedCoercivityReport rep;
  rep.l2_localized = integrate(grid, (w.phi * u2).eval());
  rep.commutator = integrate(grid, (w.chi_lap_chi * u2).eval()) / (w.R * w.R);
  // int chi^2 |grad u|^2 = int |grad(chi u)|^2 + int chi Lap[chi] |u|^2
  rep.h1_localized = integrate(grid, (w.phi * grad2).eval()) - rep.commutator;
  rep.kg_ratio_localized = rep.l2_localized *
                           std::pow(std::max(rep.h1_localized, 0.0),
                                    0.5 * (p - 2.0)) /
                           g.threshold_kg;
  rep.margin = 1.0 - rep.kg_ratio_localized;
  rep.commutator_bound =
      kChiLapChiBound * integrate(grid, u2) / (w.R * w.R);
  return rep;
}

MorawetzSeries spacetime_estimate(const Trajectory& traj, RPolicy policy,
                                  double p, double R_fixed, double fit_lo,
                                  double fit_hi) {
  if (traj.blowup)
    throw EstimateNotApplicable("spacetime_estimate: trajectory halted in blow-up");
  if (traj.times.size() < 3)
    throw InsufficientData("spacetime_estimate: need at least 3 snapshots");

  MorawetzSeries s;
  s.sigma = std::min(2.0, 0.5 * p);
  s.alpha_theory = std::max(1.0 / 3.0, 2.0 / (p + 2.0));
  s.e0 = traj.monitors.front().mass;

  const double r_cap = 0.5 * traj.grid->r_max - 2.0 * traj.grid->h;
  WeightPair w;
  bool have_weights = false;

  const std::size_t m = traj.times.size();
  double cumulative = 0.0;
  double eta = std::numeric_limits<double>::infinity();
  double c_bound = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double t = traj.times[k];
    double R = R_fixed;
    if (policy == RPolicy::Scaling)
      R = std::clamp(std::pow(std::max(t, 1.0), 1.0 / (1.0 + s.sigma)), 1.0, r_cap);
    R = std::min(R, r_cap);
    if (!have_weights || w.R != R) {
      w = make_weights(R, traj.grid);
      have_weights = true;
    }

    const ComplexRadialField u = traj.state(k);
    const RateTerms rt = rate_decomposition(u, w, p);
    const double a = morawetz_action(u, w);

    if (k > 0)
      cumulative += 0.5 * (traj.monitors[k].potential +
                           traj.monitors[k - 1].potential) *
                    (t - traj.times[k - 1]);

    const Eigen::ArrayXd mask =
        (traj.grid->nodes <= 0.5 * R).cast<double>() *
        abs_pow(traj.snapshots[k], p + 2.0);
    const double local_pot = integrate(*traj.grid, mask);

    s.times.push_back(t);
    s.action.push_back(a);
    s.rate_coercive.push_back(rt.rate_coercive);
    s.rate_exact.push_back(rt.rate);
    s.rate_error_budget.push_back(rt.error_budget);
    s.local_potential.push_back(local_pot);
    s.cumulative_spacetime.push_back(cumulative);
    s.R_used.push_back(R);

    if (local_pot > 1e-14)
      eta = std::min(eta, (rt.rate_coercive + rt.error_budget) / local_pot);
    if (s.e0 > 0.0)
      c_bound = std::max(c_bound, std::abs(a) / (R * s.e0));
  }
  s.spacetime_potential = cumulative;
  s.eta_measured = std::isfinite(eta) ? eta : 0.0;
  s.c_action_bound = c_bound;

  // finite-difference dA/dt on the snapshot times
  s.rate_fd.assign(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    if (k == 0)
      s.rate_fd[k] = (s.action[1] - s.action[0]) / (s.times[1] - s.times[0]);
    else if (k + 1 == m)
      s.rate_fd[k] =
          (s.action[k] - s.action[k - 1]) / (s.times[k] - s.times[k - 1]);
    else
      s.rate_fd[k] =
          (s.action[k + 1] - s.action[k - 1]) / (s.times[k + 1] - s.times[k - 1]);
  }

  // log-log least squares slope of the cumulative potential over the window
  const double T = s.times.back();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (std::size_t k = 0; k < m; ++k) {
    const double t = s.times[k];
    if (t < fit_lo * T || t > fit_hi * T) continue;
    if (!(s.cumulative_spacetime[k] > 0.0) || !(t > 0.0)) continue;
    const double x = std::log(t), y = std::log(s.cumulative_spacetime[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  s.alpha_fitted = (cnt >= 2) ? (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx)
                              : std::numeric_limits<double>::quiet_NaN();
  return s;
}

}  // namespace nls2d
