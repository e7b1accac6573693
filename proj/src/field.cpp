#include "nls2d/field.hpp"

#include <cmath>

namespace nls2d {

ComplexRadialField make_field(GridPtr grid,
                              const std::function<Complex(double)>& f) {
  ComplexRadialField out;
  out.grid = std::move(grid);
  out.values.resize(out.grid->n);
  for (Eigen::Index k = 0; k < out.grid->n; ++k)
    out.values(k) = f(out.grid->nodes(k));
  return out;
}

ComplexRadialField zero_field(GridPtr grid) {
  ComplexRadialField out;
  out.grid = std::move(grid);
  out.values = Eigen::ArrayXcd::Zero(out.grid->n);
  return out;
}

bool all_finite(const ComplexRadialField& f) {
  return f.values.allFinite();
}

bool origin_regular(const ComplexRadialField& f, double tol) {
  const auto& r = f.grid->nodes;
  const Complex u1 = f.values(0), u2 = f.values(1), u3 = f.values(2);
  const Complex b = (u2 - u1) / (r(1) * r(1) - r(0) * r(0));
  const Complex pred = u1 + b * (r(2) * r(2) - r(0) * r(0));
  const double scale =
      std::max({std::abs(u1), std::abs(u2), std::abs(u3)}) + 1e-300;
  return std::abs(u3 - pred) <= tol * scale;
}

Eigen::ArrayXd abs_pow(const Eigen::ArrayXcd& u, double p) {
  Eigen::ArrayXd u2 = u.abs2();
  if (p == 2.0) return u2;
  if (p == 3.0) return u2 * u2.sqrt();
  if (p == 4.0) return u2.square();
  if (p == 5.0) return u2.square() * u2.sqrt();
  if (p == 6.0) return u2.cube();
  if (p == 8.0) return u2.square().square();
  return u2.pow(0.5 * p);
}

double lp_norm(const ComplexRadialField& f, double q) {
  if (!(q >= 1.0)) throw InvalidArgument("lp_norm: q must be >= 1");
  const double s = integrate(*f.grid, abs_pow(f.values, q));
  return std::pow(s, 1.0 / q);
}

double conserved_mass(const ComplexRadialField& f) {
  return integrate_volumes(*f.grid, f.values.abs2());
}

Eigen::ArrayXcd radial_derivative(const RadialGrid& g, const Eigen::ArrayXcd& u) {
  const Eigen::Index n = g.n;
  const double inv2h = 1.0 / (2.0 * g.h);
  Eigen::ArrayXcd d(n);
  // even mirror: the ghost node at -h/2 carries u(0+h/2)
  d(0) = (u(1) - u(0)) * inv2h;
  d.segment(1, n - 2) = (u.tail(n - 2) - u.head(n - 2)) * inv2h;
  d(n - 1) = (3.0 * u(n - 1) - 4.0 * u(n - 2) + u(n - 3)) * inv2h;
  return d;
}

// Conserved-tier norms: built on the cell volumes so that mass is exactly
// the invariant of the Crank-Nicolson step and energy drift measures only
// the splitting error.
double grad_l2_sq(const ComplexRadialField& f) {
  return integrate_volumes(*f.grid,
                           radial_derivative(*f.grid, f.values).abs2().eval());
}

NormBundle norm_bundle(const ComplexRadialField& f, double p) {
  if (!(p >= 2.0))
    throw UnsupportedExponent("norm_bundle: exponent p must be >= 2");
  NormBundle nb;
  nb.mass = integrate_volumes(*f.grid, f.values.abs2());
  nb.kinetic = grad_l2_sq(f);
  nb.potential = integrate_volumes(*f.grid, abs_pow(f.values, p + 2.0));
  nb.energy = 0.5 * nb.kinetic - nb.potential / (p + 2.0);
  nb.h1 = std::sqrt(nb.mass + nb.kinetic);
  return nb;
}

TridiagOperator laplacian_tridiag(const RadialGrid& g) {
  const Eigen::Index n = g.n;
  TridiagOperator A;
  A.lower = Eigen::ArrayXd::Zero(n);
  A.diag = Eigen::ArrayXd::Zero(n);
  A.upper = Eigen::ArrayXd::Zero(n);
  const double twopi = 2.0 * M_PI;
  for (Eigen::Index k = 0; k < n; ++k) {
    // face conductances 2*pi*j between nodes j and j+1; the face at r=0 has
    // zero area and the outermost face is a Dirichlet wall (ghost value 0)
    const double cr = twopi * static_cast<double>(k + 1);
    const double cl = twopi * static_cast<double>(k);
    const double w = g.volumes(k);
    if (k + 1 < n) A.upper(k) = cr / w;
    if (k > 0) A.lower(k) = cl / w;
    // assemble the diagonal from the stored off-diagonal quotients so that
    // interior rows annihilate constants exactly
    A.diag(k) = -(A.upper(k) + A.lower(k));
    if (k + 1 == n) A.diag(k) -= cr / w;  // Dirichlet ghost beyond r_max
  }
  return A;
}

ComplexRadialField radial_laplacian(const ComplexRadialField& f) {
  const auto A = laplacian_tridiag(*f.grid);
  const Eigen::Index n = f.grid->n;
  ComplexRadialField out;
  out.grid = f.grid;
  out.values.resize(n);
  const auto& u = f.values;
  out.values = A.diag * u;
  out.values.head(n - 1) += A.upper.head(n - 1) * u.tail(n - 1);
  out.values.tail(n - 1) += A.lower.tail(n - 1) * u.head(n - 1);
  return out;
}

double radial_sobolev_ratio(const ComplexRadialField& f) {
  const double peak = (f.grid->nodes.sqrt() * f.values.abs()).maxCoeff();
  const double mass = integrate_volumes(*f.grid, f.values.abs2());
  const double kin = grad_l2_sq(f);
  const double h1 = std::sqrt(mass + kin);
  if (h1 == 0.0) throw UndefinedRatio("radial_sobolev_ratio: zero field");
  return peak / h1;
}

Eigen::ArrayXcd resample(const ComplexRadialField& f, const Eigen::ArrayXd& radii) {
  const auto& g = *f.grid;
  const Eigen::Index n = g.n;
  const double h = g.h;
  Eigen::ArrayXcd out(radii.size());

  // signed node position for a (possibly mirrored) integer index
  auto node_r = [&](Eigen::Index j) {
    return (j >= 0) ? (static_cast<double>(j) + 0.5) * h
                    : -(static_cast<double>(-1 - j) + 0.5) * h;
  };
  auto node_u = [&](Eigen::Index j) -> Complex {
    const Eigen::Index m = (j >= 0) ? j : (-1 - j);
    if (m >= n) return Complex(0.0, 0.0);
    return f.values(m);
  };

  for (Eigen::Index i = 0; i < radii.size(); ++i) {
    const double x = radii(i);
    if (x > g.r_max + 3.0 * h) {
      out(i) = 0.0;
      continue;
    }
    Eigen::Index base = static_cast<Eigen::Index>(std::floor(x / h - 0.5)) - 2;
    if (base > n - 6) base = n - 6;  // one-sided near the outer edge
    Complex acc(0.0, 0.0);
    for (int a = 0; a < 6; ++a) {
      const Eigen::Index ja = base + a;
      const double xa = node_r(ja);
      double lag = 1.0;
      for (int m = 0; m < 6; ++m) {
        if (m == a) continue;
        const double xm = node_r(base + m);
        lag *= (x - xm) / (xa - xm);
      }
      acc += lag * node_u(ja);
    }
    out(i) = acc;
  }
  return out;
}

}  // namespace nls2d
