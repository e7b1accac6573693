#include <doctest.h>

#include "nls2d/evolve.hpp"
#include "nls2d/ground_state.hpp"
#include "oracles.hpp"

using namespace nls2d;

namespace {

Complex free_gaussian(double r, double t) {
  const Complex s(1.0, 4.0 * t);
  return std::exp(-r * r / s) / s;
}

double l2_dist(const RadialGrid& g, const Eigen::ArrayXcd& a,
               const Eigen::ArrayXcd& b) {
  return std::sqrt(integrate_volumes(g, (a - b).abs2().eval()));
}

}  // namespace

TEST_CASE("one step conserves mass to rounding") {
  GridPtr g = make_grid(16.0, 4096);
  const ComplexRadialField u0 = make_field(g, [](double r) {
    return Complex(0.8 * std::exp(-r * r), 0.1 * std::exp(-2.0 * r * r));
  });
  const double m0 = conserved_mass(u0);
  const ComplexRadialField u1 = step(u0, 1e-3, 3.0);
  CHECK(std::abs(conserved_mass(u1) / m0 - 1.0) < 1e-12);
}

TEST_CASE("constant-modulus data: first nonlinear substep is a global phase") {
  GridPtr g = make_grid(16.0, 1024);
  const double c = 0.7, dt = 2e-3, p = 3.0;
  const ComplexRadialField u0 = make_field(g, [c](double r) {
    return std::polar(c, 0.3 * r * r);
  });

  const ComplexRadialField stepped = step(u0, dt, p);

  // manual composition with the global first half-phase
  StrangStepper s(g, dt, p);
  Eigen::ArrayXcd v = u0.values * std::polar(1.0, 0.5 * dt * std::pow(c, p));
  s.linear_step(v);
  v *= (0.5 * dt * abs_pow(v, p))
           .unaryExpr([](double t) { return std::polar(1.0, t); });
  CHECK((stepped.values - v).abs().maxCoeff() < 1e-14);
}

TEST_CASE("splitting is locally third order") {
  GridPtr g = make_grid(16.0, 2048);
  const ComplexRadialField u0 = make_field(g, [](double r) {
    return Complex(std::exp(-r * r), 0.0);
  });
  auto local_diff = [&](double dt) {
    const ComplexRadialField one = step(u0, dt, 3.0);
    const ComplexRadialField half = step(step(u0, 0.5 * dt, 3.0), 0.5 * dt, 3.0);
    return l2_dist(*g, one.values, half.values);
  };
  const double e1 = local_diff(2e-2);
  const double e2 = local_diff(1e-2);
  CHECK(e1 / e2 > 6.0);
  CHECK(e1 / e2 < 10.0);
}

TEST_CASE("time reversal and gauge covariance") {
  GridPtr g = make_grid(16.0, 2048);
  const ComplexRadialField u0 = make_field(g, [](double r) {
    return Complex(0.9 * std::exp(-r * r), -0.2 * std::exp(-1.5 * r * r));
  });
  const double dt = 1e-3, p = 3.0;

  const ComplexRadialField back = step(step(u0, dt, p), -dt, p);
  CHECK(l2_dist(*g, back.values, u0.values) < 1e-10);

  const Complex phase = std::polar(1.0, 1.234);
  ComplexRadialField rotated = u0;
  rotated.values *= phase;
  const ComplexRadialField a = step(rotated, dt, p);
  const ComplexRadialField b = step(u0, dt, p);
  CHECK((a.values - phase * b.values).abs().maxCoeff() < 1e-12);
}

TEST_CASE("free propagator matches the closed-form Gaussian") {
  GridPtr g = make_grid(20.0, 4096);
  const ComplexRadialField f =
      make_field(g, [](double r) { return Complex(std::exp(-r * r), 0.0); });

  const ComplexRadialField same = linear_propagate(f, 0.0);
  CHECK((same.values - f.values).abs().maxCoeff() == 0.0);

  const double t = 0.25;
  const ComplexRadialField got = linear_propagate(f, t);
  const Eigen::ArrayXcd exact = g->nodes.unaryExpr(
      [t](double r) { return free_gaussian(r, t); });
  CHECK(l2_dist(*g, got.values, exact) < 1e-6);

  // group inverse
  const ComplexRadialField round = linear_propagate(got, -t);
  CHECK(l2_dist(*g, round.values, f.values) < 1e-8);

  CHECK_THROWS_AS(linear_propagate(f, 0.1, LinearPropagateOptions{1e-3, 2}),
                  InvalidArgument);
}

TEST_CASE("soliton stays stationary in modulus") {
  const GroundStateProfile gs = shoot_ground_state(3.0);
  double errs[2];
  int i = 0;
  for (long n : {4096L, 8192L}) {
    GridPtr g = make_grid(16.0, n);
    ComplexRadialField u0{g, resample(gs.field, g->nodes)};
    EvolveConfig cfg;
    cfg.dt = 5e-4;
    cfg.t_end = 1.0;
    cfg.snapshot_stride = 2000;
    cfg.p = 3.0;
    const Trajectory traj = evolve(u0, cfg);
    CHECK(!traj.blowup);
    const Eigen::ArrayXcd uT = traj.snapshots.back();
    const Eigen::ArrayXd q = u0.values.real();
    const double err = std::sqrt(integrate_volumes(
        *g, (uT.abs() - q).square().eval())) /
                       std::sqrt(integrate_volumes(*g, q.square().eval()));
    errs[i++] = err;
    CHECK(err < 5e-3);
  }
  CHECK(errs[0] / errs[1] > 2.5);  // shrinks roughly like h^2
}

TEST_CASE("evolve monitors, conservation report and blow-up flag") {
  GridPtr g = make_grid(24.0, 3072);
  const ComplexRadialField u0 = make_field(g, [](double r) {
    return Complex(0.4 * std::exp(-r * r), 0.0);
  });
  EvolveConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 2.0;
  cfg.snapshot_stride = 200;
  cfg.p = 3.0;
  const Trajectory traj = evolve(u0, cfg);
  CHECK(!traj.blowup);
  CHECK(traj.times.front() == 0.0);
  for (std::size_t k = 1; k < traj.times.size(); ++k)
    CHECK(traj.times[k] > traj.times[k - 1]);

  const ConservationReport rep = conservation_report(traj);
  CHECK(rep.max_mass_drift < 1e-10);
  CHECK(rep.max_energy_drift < 5e-4);
  CHECK(!rep.boundary_flagged);

  // focusing data above the virial threshold must trip the gradient halt
  const ComplexRadialField big = make_field(g, [](double r) {
    return Complex(3.0 * std::exp(-r * r), 0.0);
  });
  EvolveConfig bcfg;
  bcfg.dt = 2e-5;
  bcfg.t_end = 5.0;
  bcfg.snapshot_stride = 500;
  bcfg.p = 3.0;
  const Trajectory bt = evolve(big, bcfg);
  CHECK(bt.blowup);
  CHECK(bt.halt_time < 5.0);
  CHECK(bt.gradient_growth >= 10.0);
}

TEST_CASE("undersized box trips the boundary monitor") {
  GridPtr g = make_grid(6.0, 512);
  const ComplexRadialField u0 = make_field(g, [](double r) {
    return Complex(0.5 * std::exp(-r * r), 0.0);
  });
  EvolveConfig cfg;
  cfg.dt = 2e-3;
  cfg.t_end = 6.0;
  cfg.snapshot_stride = 250;
  cfg.p = 3.0;
  cfg.nonlinearity = false;  // free dispersion reaches the wall quickly
  const Trajectory traj = evolve(u0, cfg);
  const ConservationReport rep = conservation_report(traj, 1e-4);
  CHECK(rep.boundary_flagged);
  CHECK(rep.max_boundary_fraction > 1e-4);
}

TEST_CASE("energy drift shrinks at second order in dt") {
  const GroundStateProfile gs = shoot_ground_state(3.0);
  GridPtr g = make_grid(16.0, 4096);
  ComplexRadialField u0{g, resample(gs.field, g->nodes)};
  auto drift = [&](double dt) {
    EvolveConfig cfg;
    cfg.dt = dt;
    cfg.t_end = 1.0;
    cfg.snapshot_stride = static_cast<int>(std::lround(0.5 / dt));
    cfg.p = 3.0;
    return conservation_report(evolve(u0, cfg)).max_energy_drift;
  };
  const double d1 = drift(2e-3);
  const double d2 = drift(1e-3);
  CHECK(std::log2(d1 / d2) >= 1.8);
}
