#include "nls2d/evolve.hpp"

#include <cmath>

namespace nls2d {

namespace {

constexpr Complex kI(0.0, 1.0);

// Thomas factorization of M = I - i*alpha*A for a real tridiagonal A.
// Weak diagonal dominance of the Cayley matrix makes pivoting unnecessary.
void factor_cn(const TridiagOperator& A, double alpha, Eigen::ArrayXcd& cp,
               Eigen::ArrayXcd& inv) {
  const Eigen::Index n = A.diag.size();
  cp.resize(n);
  inv.resize(n);
  Complex denom = 1.0 - kI * alpha * A.diag(0);
  if (denom == 0.0) throw SolverFailure("linear step: zero pivot");
  inv(0) = 1.0 / denom;
  cp(0) = (-kI * alpha * A.upper(0)) * inv(0);
  for (Eigen::Index k = 1; k < n; ++k) {
    const Complex a = -kI * alpha * A.lower(k);
    denom = (1.0 - kI * alpha * A.diag(k)) - a * cp(k - 1);
    if (denom == 0.0) throw SolverFailure("linear step: zero pivot");
    inv(k) = 1.0 / denom;
    cp(k) = (-kI * alpha * A.upper(k)) * inv(k);
  }
}

}  // namespace

StrangStepper::StrangStepper(GridPtr grid, double dt, double p, bool nonlinear)
    : grid_(std::move(grid)), dt_(dt), p_(p), nonlinear_(nonlinear),
      A_(laplacian_tridiag(*grid_)) {
  if (dt_ == 0.0 || !std::isfinite(dt_))
    throw InvalidArgument("StrangStepper: dt must be nonzero and finite");
  factor_cn(A_, 0.5 * dt_, cp_, inv_);
}

void StrangStepper::linear_step(Eigen::ArrayXcd& u) const {
  const Eigen::Index n = u.size();
  const Complex ia = kI * (0.5 * dt_);
  // rhs = (I + i dt/2 A) u
  Eigen::ArrayXcd rhs = u + ia * (A_.diag * u);
  rhs.head(n - 1) += ia * (A_.upper.head(n - 1) * u.tail(n - 1));
  rhs.tail(n - 1) += ia * (A_.lower.tail(n - 1) * u.head(n - 1));
  // forward sweep, then back substitution
  rhs(0) *= inv_(0);
  for (Eigen::Index k = 1; k < n; ++k)
    rhs(k) = (rhs(k) - (-ia) * A_.lower(k) * rhs(k - 1)) * inv_(k);
  u(n - 1) = rhs(n - 1);
  for (Eigen::Index k = n - 2; k >= 0; --k) u(k) = rhs(k) - cp_(k) * u(k + 1);
}

void StrangStepper::step(Eigen::ArrayXcd& u) const {
  if (nonlinear_) {
    const double half = 0.5 * dt_;
    Eigen::ArrayXd theta = half * abs_pow(u, p_);
    u *= theta.unaryExpr([](double t) { return std::polar(1.0, t); });
    linear_step(u);
    theta = half * abs_pow(u, p_);
    u *= theta.unaryExpr([](double t) { return std::polar(1.0, t); });
  } else {
    linear_step(u);
  }
}

ComplexRadialField step(const ComplexRadialField& u, double dt, double p) {
  if (!all_finite(u)) throw InvalidArgument("step: non-finite state");
  StrangStepper s(u.grid, dt, p);
  ComplexRadialField out = u;
  s.step(out.values);
  return out;
}

Trajectory evolve(const ComplexRadialField& u0, const EvolveConfig& cfg) {
  if (!(cfg.dt > 0.0) || !(cfg.t_end > 0.0) || cfg.snapshot_stride < 1 ||
      !(cfg.boundary_guard > 0.0 && cfg.boundary_guard < 1.0))
    throw InvalidArgument("evolve: bad config");
  if (!(cfg.p >= 2.0)) throw UnsupportedExponent("evolve: p must be >= 2");

  const auto& g = *u0.grid;
  const long nsteps = std::lround(cfg.t_end / cfg.dt);
  const double dt = cfg.t_end / static_cast<double>(nsteps);
  StrangStepper stepper(u0.grid, dt, cfg.p, cfg.nonlinearity);

  Trajectory traj;
  traj.grid = u0.grid;
  traj.p = cfg.p;
  traj.dt = dt;

  const double guard_r = cfg.boundary_guard * g.r_max;
  Eigen::ArrayXd guard_mask =
      (g.nodes > guard_r).cast<double>() * g.volumes;

  auto record = [&](double t, const Eigen::ArrayXcd& u) {
    traj.times.push_back(t);
    traj.snapshots.push_back(u);
    NormBundle nb = norm_bundle(ComplexRadialField{u0.grid, u}, cfg.p);
    traj.monitors.push_back(nb);
    const double bm = (guard_mask * u.abs2()).sum();
    traj.boundary_mass.push_back(nb.mass > 0.0 ? bm / nb.mass : 0.0);
  };

  Eigen::ArrayXcd u = u0.values;
  record(0.0, u);
  const double kin0 = traj.monitors.front().kinetic;
  const double halt_kin = cfg.blowup_factor * cfg.blowup_factor * kin0;

  for (long k = 1; k <= nsteps; ++k) {
    Eigen::ArrayXcd prev = u;
    stepper.step(u);
    const double t = static_cast<double>(k) * dt;

    if (!u.allFinite()) {
      traj.blowup = true;
      traj.halt_time = t;
      if (traj.times.back() < t - 1.5 * dt + 1e-300)
        record(t - dt, prev);  // keep the last finite state if not yet recorded
      break;
    }
    const double kin = grad_l2_sq(ComplexRadialField{u0.grid, u});
    if (kin0 > 0.0)
      traj.gradient_growth =
          std::max(traj.gradient_growth, std::sqrt(kin / kin0));
    if (kin0 > 0.0 && kin >= halt_kin) {
      traj.blowup = true;
      traj.halt_time = t;
      record(t, u);
      break;
    }
    if (k % cfg.snapshot_stride == 0 || k == nsteps) record(t, u);
  }
  return traj;
}

ComplexRadialField linear_propagate(const ComplexRadialField& f, double t,
                                    const LinearPropagateOptions& opts) {
  if (!all_finite(f)) throw InvalidArgument("linear_propagate: non-finite state");
  if (opts.refine < 1 || opts.refine % 2 == 0)
    throw InvalidArgument("linear_propagate: refine must be odd and >= 1");
  if (t == 0.0) return f;

  const long nsteps = std::max(1L, std::lround(std::abs(t) / opts.dt));
  const double dt = t / static_cast<double>(nsteps);

  if (opts.refine == 1) {
    StrangStepper s(f.grid, dt, 0.0, false);
    ComplexRadialField out = f;
    for (long k = 0; k < nsteps; ++k) s.linear_step(out.values);
    return out;
  }

  // commensurate finer lattice: odd factors keep the cell-centered nodes nested
  const int m = opts.refine;
  const Eigen::Index nf = m * f.grid->n - (m - 1) / 2;
  GridPtr fine = make_grid(f.grid->r_max, nf);
  ComplexRadialField uf{fine, resample(f, fine->nodes)};
  StrangStepper s(fine, dt, 0.0, false);
  for (long k = 0; k < nsteps; ++k) s.linear_step(uf.values);

  ComplexRadialField out;
  out.grid = f.grid;
  out.values.resize(f.grid->n);
  for (Eigen::Index k = 0; k < f.grid->n; ++k)
    out.values(k) = uf.values(m * (k + 1) - (m - 1) / 2 - 1);
  return out;
}

ConservationReport conservation_report(const Trajectory& traj,
                                       double boundary_tol) {
  if (traj.monitors.empty())
    throw InsufficientData("conservation_report: empty trajectory");
  ConservationReport rep;
  rep.boundary_tol = boundary_tol;
  const NormBundle& first = traj.monitors.front();
  const double escale = std::max(std::abs(first.energy), 0.5 * first.kinetic);
  for (std::size_t k = 0; k < traj.monitors.size(); ++k) {
    const NormBundle& nb = traj.monitors[k];
    if (first.mass > 0.0)
      rep.max_mass_drift =
          std::max(rep.max_mass_drift, std::abs(nb.mass / first.mass - 1.0));
    if (escale > 0.0)
      rep.max_energy_drift = std::max(
          rep.max_energy_drift, std::abs(nb.energy - first.energy) / escale);
    rep.max_boundary_fraction =
        std::max(rep.max_boundary_fraction, traj.boundary_mass[k]);
  }
  rep.boundary_flagged = rep.max_boundary_fraction > boundary_tol;
  return rep;
}

}  // namespace nls2d
