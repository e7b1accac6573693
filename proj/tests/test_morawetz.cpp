#include <doctest.h>

#include "nls2d/morawetz.hpp"
#include "nls2d/variational.hpp"
#include "oracles.hpp"

using namespace nls2d;

namespace {

GroundStateProfile& gs3() {
  static GroundStateProfile g = shoot_ground_state(3.0);
  return g;
}

double effective_radius_of(const ComplexRadialField& u) {
  const double mass = integrate(*u.grid, u.values.abs2());
  const double m2 =
      integrate(*u.grid, (u.grid->nodes.square() * u.values.abs2()).eval());
  return 2.0 * std::sqrt(m2 / mass);
}

}  // namespace

TEST_CASE("weight profiles satisfy the defining identities and bounds") {
  GridPtr g = make_grid(48.0, 4096);
  for (const double R : {1.0, 4.0, 16.0}) {
    const WeightPair w = make_weights(R, g);
    const Eigen::ArrayXd y = g->nodes / R;

    // phi = psi = 1 inside the unit ball; psi = (3/2) R / r beyond 2R
    for (Eigen::Index k = 0; k < g->n; ++k) {
      if (y(k) <= 1.0) {
        CHECK(w.phi(k) == 1.0);
        CHECK(w.psi(k) == 1.0);
      }
      if (y(k) >= 2.0) {
        CHECK(w.phi(k) == 0.0);
        CHECK(std::abs(w.psi(k) - 1.5 / y(k)) < 1e-15);
      }
    }

    // (3.2): y psi' = phi - psi, exact by construction
    CHECK((y * w.psi_d - (w.phi - w.psi)).abs().maxCoeff() < 1e-10);

    // (3.1): |psi| <= min(1, 1.5/y); (3.3): |psi'| <= 1.5/y^2 for y > 1
    for (Eigen::Index k = 0; k < g->n; ++k) {
      CHECK(std::abs(w.psi(k)) <= std::min(1.0, 1.5 / y(k)) + 1e-12);
      if (y(k) > 1.0)
        CHECK(std::abs(w.psi_d(k)) <= 1.5 / (y(k) * y(k)) + 1e-12);
    }

    // numeric derivative of the stored psi matches the stored psi'
    double max_dev = 0.0;
    for (Eigen::Index k = 1; k + 1 < g->n; ++k) {
      const double num = (w.psi(k + 1) - w.psi(k - 1)) / (y(k + 1) - y(k - 1));
      max_dev = std::max(max_dev, std::abs(num - w.psi_d(k)));
    }
    CHECK(max_dev < 1e-3);
  }

  // c0 = int_0^2 phi lies in (1, 2); for this smoothstep it is exactly 3/2
  CHECK(weight_psi(2.0) * 2.0 == doctest::Approx(1.5).epsilon(1e-14));

  CHECK_THROWS_AS(make_weights(0.5, g), InvalidArgument);
  CHECK_THROWS_AS(make_weights(24.0, g), WeightOverflow);
}

TEST_CASE("action vanishes for real data and matches the quadrature oracle") {
  GridPtr g = make_grid(48.0, 4096);
  const WeightPair w = make_weights(4.0, g);
  const ComplexRadialField real_f = make_field(g, [](double r) {
    return Complex(std::exp(-r * r) * (1.0 + 0.3 * r), 0.0);
  });
  CHECK(morawetz_action(real_f, w) == 0.0);

  // u = e^{-r^2} e^{i beta r^2}: frozen values from an independent
  // high-resolution quadrature of the analytic integrand
  GridPtr fine = make_grid(12.0, 262144);
  {
    const double beta = 0.7, R = 4.0;
    const WeightPair wf = make_weights(R, fine);
    const ComplexRadialField u = make_field(fine, [beta](double r) {
      return std::polar(std::exp(-r * r), beta * r * r);
    });
    CHECK(std::abs(morawetz_action(u, wf) / 1.099557428756428 - 1.0) < 1e-8);
  }
  {
    const double beta = -1.3, R = 1.0;
    const WeightPair wf = make_weights(R, fine);
    const ComplexRadialField u = make_field(fine, [beta](double r) {
      return std::polar(std::exp(-r * r), beta * r * r);
    });
    CHECK(std::abs(morawetz_action(u, wf) / -2.023512217069656 - 1.0) < 1e-8);

    // and the in-test adaptive Simpson oracle agrees
    const double oracle_val = oracle::radial_integral(
        [beta, R](double r) {
          return weight_psi(r / R) * r * (2.0 * beta * r) *
                 std::exp(-2.0 * r * r);
        },
        12.0);
    CHECK(std::abs(oracle_val / -2.023512217069656 - 1.0) < 1e-10);
  }
}

TEST_CASE("weight-derivative error terms vanish off the transition annulus") {
  GridPtr g = make_grid(48.0, 4096);
  const WeightPair w = make_weights(8.0, g);
  // data supported well inside r = R: the curvature terms are fp-zero
  const ComplexRadialField u = make_field(g, [](double r) {
    return std::polar(0.7 * std::exp(-r * r), 0.4 * r * r);
  });
  const RateTerms rt = rate_decomposition(u, w, 3.0);
  CHECK(std::abs(rt.curvature_term) < 1e-30);
  // and the coercive rate equals the plain difference of the two terms
  CHECK(rt.rate ==
        doctest::Approx(rt.gradient_term - rt.potential_term).epsilon(1e-12));
}

TEST_CASE("rate decomposition integrates to the action difference") {
  // short sub-threshold run; the fundamental theorem of calculus ties
  // A(T) - A(0) to the time integral of the exact rate
  const double p = 3.0;
  GridPtr g = make_grid(48.0, 3072);
  const ComplexRadialField u0 = make_field(g, [](double r) {
    return Complex(0.45 * std::exp(-r * r), 0.0);
  });
  const auto [v, lam] = rescale_to_unit(u0, p);
  (void)lam;

  EvolveConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 2.0;
  cfg.snapshot_stride = 25;
  cfg.p = p;
  const Trajectory traj = evolve(v, cfg);
  REQUIRE(!traj.blowup);

  const double R = std::max(1.0, 8.0 * effective_radius_of(v));
  const WeightPair w = make_weights(R, g);
  const double e0 = traj.monitors.front().mass;

  std::vector<double> action, rate;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const ComplexRadialField u = traj.state(k);
    action.push_back(morawetz_action(u, w));
    rate.push_back(rate_decomposition(u, w, p).rate);
  }
  double integral = 0.0;
  for (std::size_t k = 1; k < rate.size(); ++k)
    integral += 0.5 * (rate[k] + rate[k - 1]) * (traj.times[k] - traj.times[k - 1]);
  const double defect = std::abs(action.back() - action.front() - integral);
  CHECK(defect < 1e-3 * R * e0);

  // A(0) = 0 for real initial data, and the finite-difference rate agrees
  // with the analytic decomposition at t = 0
  CHECK(action.front() == 0.0);
  const double fd0 = (action[1] - action[0]) / (traj.times[1] - traj.times[0]);
  CHECK(std::abs(fd0 - rate[0]) < 2e-2 * std::abs(rate[0]) + 1e-8);

  // coercive rate bounded below through the local potential
  double eta = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const ComplexRadialField u = traj.state(k);
    const RateTerms rt = rate_decomposition(u, w, p);
    const Eigen::ArrayXd mask =
        (g->nodes <= 0.5 * R).cast<double>() * abs_pow(traj.snapshots[k], p + 2.0);
    const double local_pot = integrate(*g, mask);
    if (local_pot > 1e-14)
      eta = std::min(eta, (rt.rate_coercive + rt.error_budget) / local_pot);
  }
  CHECK(eta > 0.0);

  // the radial Sobolev tail estimate holds snapshot-wise with constant 1
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const ComplexRadialField u = traj.state(k);
    const double S = radial_sobolev_ratio(u);
    const double h1 = norm_bundle(u, p).h1;
    const double mass_w = integrate(*g, u.values.abs2());
    const Eigen::ArrayXd tail_mask =
        (g->nodes > R).cast<double>() * (R / g->nodes) * abs_pow(u.values, p + 2.0);
    const double lhs = integrate(*g, tail_mask);
    const double rhs = std::pow(R, -0.5 * p) * std::pow(S * h1, p) * mass_w;
    CHECK(lhs <= rhs * (1.0 + 1e-12));
  }
}

TEST_CASE("localized coercivity check") {
  const double p = 3.0;
  const GroundStateProfile& g = gs3();
  GridPtr grid = make_grid(48.0, 4096);
  const ComplexRadialField u0 = make_field(grid, [](double r) {
    return Complex(0.45 * std::exp(-r * r), 0.0);
  });
  const ThresholdReport rep = classify(u0, p, g);
  REQUIRE(rep.below);
  const double global_margin = 1.0 - rep.kg_ratio;

  const double reff = effective_radius_of(u0);
  const WeightPair w8 = make_weights(std::max(1.0, 8.0 * reff), grid);
  const LocalizedCoercivityReport loc8 = coercive_lower_bound_check(u0, w8, p, g);
  CHECK(loc8.margin > 0.0);
  CHECK(std::abs(loc8.commutator) <= loc8.commutator_bound * (1.0 + 1e-12));

  // large R recovers the global margin
  const WeightPair w20 = make_weights(20.0, grid);
  const LocalizedCoercivityReport loc20 = coercive_lower_bound_check(u0, w20, p, g);
  CHECK(std::abs(loc20.margin - global_margin) < 0.01);
}

TEST_CASE("spacetime estimate exponents and blow-up rejection") {
  const double p4 = 4.0, p3 = 3.0;
  GridPtr g = make_grid(48.0, 1024);
  const ComplexRadialField u0 = make_field(g, [](double r) {
    return Complex(0.3 * std::exp(-r * r), 0.0);
  });
  EvolveConfig cfg;
  cfg.dt = 2e-3;
  cfg.t_end = 1.0;
  cfg.snapshot_stride = 100;

  cfg.p = p4;
  const Trajectory t4 = evolve(u0, cfg);
  const MorawetzSeries s4 = spacetime_estimate(t4, RPolicy::Fixed, p4, 4.0);
  CHECK(s4.sigma == 2.0);
  CHECK(s4.alpha_theory == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  cfg.p = p3;
  const Trajectory t3 = evolve(u0, cfg);
  const MorawetzSeries s3 = spacetime_estimate(t3, RPolicy::Scaling, p3, 4.0);
  CHECK(s3.sigma == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(s3.alpha_theory == doctest::Approx(0.4).epsilon(1e-15));
  for (const double R : s3.R_used) CHECK(R >= 1.0);

  Trajectory broken = t3;
  broken.blowup = true;
  CHECK_THROWS_AS(spacetime_estimate(broken, RPolicy::Fixed, p3, 4.0),
                  EstimateNotApplicable);
}
