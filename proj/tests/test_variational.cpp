#include <doctest.h>

#include <random>

#include "nls2d/variational.hpp"
#include "oracles.hpp"

using namespace nls2d;

namespace {

GroundStateProfile& cached_gs(double p) {
  static std::map<double, GroundStateProfile> cache;
  auto it = cache.find(p);
  if (it == cache.end()) it = cache.emplace(p, shoot_ground_state(p)).first;
  return it->second;
}

ComplexRadialField scaled_copy(const ComplexRadialField& f, double c) {
  ComplexRadialField out = f;
  out.values *= c;
  return out;
}

}  // namespace

TEST_CASE("classification of the ground state and its dilates") {
  const double p = 3.0;
  const GroundStateProfile& g = cached_gs(p);

  const ThresholdReport at_q = classify(g.field, p, g);
  CHECK(std::abs(at_q.kg_ratio - 1.0) < 1e-6);
  CHECK(!at_q.below);  // equality case is not below

  const ThresholdReport half = classify(scaled_copy(g.field, 0.5), p, g);
  CHECK(std::abs(half.kg_ratio - std::pow(0.5, p)) < 1e-6);
  CHECK(half.me_ratio < 1.0);
  CHECK(half.below);
}

TEST_CASE("Gaussian amplitudes around the threshold") {
  const double p = 3.0;
  const GroundStateProfile& g = cached_gs(p);
  GridPtr grid = make_grid(16.0, 8192);
  const ComplexRadialField base = make_field(grid, [](double r) {
    return Complex(std::exp(-r * r), 0.0);
  });
  // kg scales as a^p, so the required amplitude is explicit
  const NormBundle nb = norm_bundle(base, p);
  const double kg1 = nb.mass * std::pow(nb.kinetic, 0.5 * (p - 2.0)) / g.threshold_kg;
  const double a = std::pow(0.9 / kg1, 1.0 / p);
  const ThresholdReport rep = classify(scaled_copy(base, a), p, g);
  CHECK(std::abs(rep.kg_ratio - 0.9) < 1e-10);
  // at kg_ratio 0.9 a Gaussian already exceeds the mass-energy threshold
  // (closed forms give me_ratio ~ 1.21 for p = 3), so it is not below
  CHECK(rep.me_ratio > 1.0);
  CHECK(!rep.below);
  CHECK(rep.below == (rep.me_ratio < 1.0 && rep.kg_ratio < 1.0));

  // a slightly smaller amplitude satisfies both conditions
  const ThresholdReport sub = classify(scaled_copy(base, 1.7), p, g);
  CHECK(sub.me_ratio < 1.0);
  CHECK(sub.kg_ratio < 1.0);
  CHECK(sub.below);
}

TEST_CASE("zero and negative-energy data") {
  const double p = 3.0;
  const GroundStateProfile& g = cached_gs(p);
  GridPtr grid = make_grid(16.0, 4096);

  const ThresholdReport z = classify(zero_field(grid), p, g);
  CHECK(z.trivial);
  CHECK(z.below);

  const ComplexRadialField big = make_field(grid, [](double r) {
    return Complex(3.0 * std::exp(-r * r), 0.0);
  });
  CHECK(norm_bundle(big, p).energy < 0.0);
  const ThresholdReport neg = classify(big, p, g);
  CHECK(!neg.me_applicable);
  CHECK(!neg.below);
  CHECK(std::isnan(neg.me_ratio));
  CHECK_THROWS_AS(rescale_to_unit(big, p), NotRescalable);
}

TEST_CASE("rescaling normalizes M = E and preserves the threshold product") {
  const double p = 3.0;
  GridPtr grid = make_grid(12.0, 16384);

  // amplitude chosen so M = 4E, well off the normalized gauge
  const double a = std::cbrt(75.0 / 8.0);
  const ComplexRadialField u0 = make_field(grid, [a](double r) {
    return Complex(a * std::exp(-r * r), 0.0);
  });
  const NormBundle before = norm_bundle(u0, p);
  CHECK(std::abs(before.mass / before.energy - 4.0) < 1e-5);

  const auto [v, lambda] = rescale_to_unit(u0, p);
  const NormBundle after = norm_bundle(v, p);
  CHECK(std::abs(after.mass / after.energy - 1.0) < 1e-8);

  // the threshold product is invariant up to the discretization error of the
  // resampled norms; the defect vanishes at the quadrature order
  auto product_defect = [p](long n) {
    GridPtr gg = make_grid(12.0, n);
    const double a = std::cbrt(75.0 / 8.0);
    const ComplexRadialField f = make_field(gg, [a](double r) {
      return Complex(a * std::exp(-r * r), 0.0);
    });
    const NormBundle nb0 = norm_bundle(f, p);
    const auto [fs, lam] = rescale_to_unit(f, p);
    (void)lam;
    const NormBundle nb1 = norm_bundle(fs, p);
    const double m0 = nb0.mass * nb0.mass * std::pow(nb0.energy, p - 2.0);
    const double m1 = nb1.mass * nb1.mass * std::pow(nb1.energy, p - 2.0);
    return std::abs(m1 / m0 - 1.0);
  };
  const double d_coarse = product_defect(16384);
  const double d_fine = product_defect(32768);
  CHECK(d_coarse < 2e-5);
  CHECK(d_coarse / d_fine > 3.0);

  // a normalized field is a fixed point
  const auto [w, lambda2] = rescale_to_unit(v, p);
  (void)w;
  CHECK(std::abs(lambda2 - 1.0) < 1e-10);
  CHECK(lambda > 0.0);
}

TEST_CASE("coercivity margin: equality at Q, sign flips across the threshold") {
  const double p = 3.0;
  const GroundStateProfile& g = cached_gs(p);

  CHECK(std::abs(coercivity_margin(g.field, p)) < 1e-5);
  CHECK(coercivity_margin(scaled_copy(g.field, 1.5), p) < 0.0);

  GridPtr grid = make_grid(12.0, 8192);
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> tgt(0.1, 0.9);
  int positive = 0;
  const int trials = 100;
  for (int it = 0; it < trials; ++it) {
    ComplexRadialField f = oracle::random_field(grid, rng);
    const NormBundle nb = norm_bundle(f, p);
    if (!(nb.kinetic > 0.0) || !(nb.mass > 0.0)) continue;
    const double kg = nb.mass * std::pow(nb.kinetic, 0.5 * (p - 2.0)) / g.threshold_kg;
    f.values *= std::pow(tgt(rng) / kg, 1.0 / p);
    if (coercivity_margin(f, p) > 0.0) ++positive;
  }
  CHECK(positive == trials);

  // phase rotation leaves the margin unchanged
  ComplexRadialField rot = g.field;
  rot.values *= std::polar(1.0, 0.77);
  CHECK(std::abs(coercivity_margin(rot, p) - coercivity_margin(g.field, p)) < 1e-13);

  CHECK_THROWS_AS(coercivity_margin(zero_field(grid), p), UndefinedMargin);
}

TEST_CASE("classify is scale invariant") {
  const double p = 3.0;
  const GroundStateProfile& g = cached_gs(p);
  GridPtr grid = make_grid(12.0, 16384);
  const ComplexRadialField u0 = make_field(grid, [](double r) {
    return Complex(0.6 * std::exp(-r * r), 0.1 * std::exp(-2.0 * r * r));
  });
  const ThresholdReport a = classify(u0, p, g);
  const auto [v, lambda] = rescale_to_unit(u0, p);
  (void)lambda;
  const ThresholdReport b = classify(v, p, g);
  // both ratios scale like the critical norm, so they match up to the
  // discretization error of the resampled data
  CHECK(std::abs(a.me_ratio / b.me_ratio - 1.0) < 2e-5);
  CHECK(std::abs(a.kg_ratio / b.kg_ratio - 1.0) < 2e-5);
  CHECK(a.below == b.below);
}

TEST_CASE("single-snapshot coercivity trajectory check") {
  const double p = 3.0;
  const GroundStateProfile& g = cached_gs(p);
  GridPtr grid = make_grid(16.0, 2048);
  const ComplexRadialField u0 = make_field(grid, [](double r) {
    return Complex(0.4 * std::exp(-r * r), 0.0);
  });
  Trajectory traj;
  traj.grid = grid;
  traj.p = p;
  traj.dt = 1e-3;
  traj.times = {0.0};
  traj.snapshots = {u0.values};
  traj.monitors = {norm_bundle(u0, p)};
  traj.boundary_mass = {0.0};

  const ThresholdReport rep = classify(u0, p, g);
  const auto out = coercivity_trajectory_check(traj, p, g, 0.1);
  CHECK(!out.violation);
  CHECK(out.margins.size() == 1);
  CHECK(out.min_margin == doctest::Approx(1.0 - rep.kg_ratio).epsilon(1e-12));
}

TEST_CASE("coercivity holds along sub-threshold and linear trajectories") {
  const double p = 3.0;
  const GroundStateProfile& g = cached_gs(p);
  GridPtr grid = make_grid(48.0, 2048);
  const ComplexRadialField u0 = make_field(grid, [](double r) {
    return Complex(0.45 * std::exp(-r * r), 0.0);
  });
  const ThresholdReport rep = classify(u0, p, g);
  REQUIRE(rep.below);
  const double delta = 1.0 - rep.kg_ratio;

  EvolveConfig cfg;
  cfg.dt = 2e-3;
  cfg.t_end = 3.0;
  cfg.snapshot_stride = 150;
  cfg.p = p;
  const Trajectory traj = evolve(u0, cfg);
  const auto out = coercivity_trajectory_check(traj, p, g, 0.5 * delta);
  CHECK(out.initial_margin_ok);
  CHECK(!out.violation);
  CHECK(out.min_margin > 0.0);

  // with the nonlinearity off the kinetic norm cannot concentrate
  EvolveConfig lin = cfg;
  lin.nonlinearity = false;
  const auto lout = coercivity_trajectory_check(evolve(u0, lin), p, g, 0.5 * delta);
  CHECK(!lout.violation);
  CHECK(lout.min_margin > 0.0);
}
