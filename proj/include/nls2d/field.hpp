#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>

#include "nls2d/grid.hpp"

namespace nls2d {

using Complex = std::complex<double>;

/// A complex radial function sampled at the grid nodes.
struct ComplexRadialField {
  GridPtr grid;
  Eigen::ArrayXcd values;

  Eigen::Index size() const { return values.size(); }
};

ComplexRadialField make_field(GridPtr grid,
                              const std::function<Complex(double)>& f);
ComplexRadialField zero_field(GridPtr grid);

bool all_finite(const ComplexRadialField& f);

/// Even-smoothness check at the origin: an even quadratic fitted through the
/// two innermost samples must predict the third within tolerance.
bool origin_regular(const ComplexRadialField& f, double tol = 0.05);

/// Mass, kinetic, potential, energy and H^1 norm of one state.
/// energy is assembled as kinetic/2 - potential/(p+2), never re-derived.
struct NormBundle {
  double mass = 0.0;
  double kinetic = 0.0;
  double potential = 0.0;
  double energy = 0.0;
  double h1 = 0.0;
};

/// (integral |f|^q 2 pi r dr)^(1/q) with the endpoint-corrected quadrature.
/// Requires q >= 1.
double lp_norm(const ComplexRadialField& f, double q);

/// The exactly conserved discrete mass (cell-volume weighted).
double conserved_mass(const ComplexRadialField& f);

/// integral |d_r f|^2 2 pi r dr with the second-order node derivative.
double grad_l2_sq(const ComplexRadialField& f);

/// All five norms for exponent p (p >= 2; p < 2 is unsupported).  Uses the
/// cell-volume discretization so mass/energy are the step's invariants.
NormBundle norm_bundle(const ComplexRadialField& f, double p);

/// Second-order radial derivative: centered in the interior, even mirror at
/// the innermost node, one-sided at r_max.
Eigen::ArrayXcd radial_derivative(const RadialGrid& g, const Eigen::ArrayXcd& u);

/// Flux-form second-order discrete Laplacian (d_rr + d_r / r).  The face at
/// r = 0 carries zero area, which encodes the even extension; the outer
/// boundary is homogeneous Dirichlet half a cell beyond r_max.
ComplexRadialField radial_laplacian(const ComplexRadialField& f);

/// Tridiagonal representation of the same operator, used by the evolver.
struct TridiagOperator {
  Eigen::ArrayXd lower;  // A(k, k-1)
  Eigen::ArrayXd diag;   // A(k, k)
  Eigen::ArrayXd upper;  // A(k, k+1)
};
TridiagOperator laplacian_tridiag(const RadialGrid& g);

/// max_k r_k^(1/2) |f(r_k)| / ||f||_H1.  Requires f != 0.
double radial_sobolev_ratio(const ComplexRadialField& f);

/// |u|^p for real p with fast paths for the common integer cases.
Eigen::ArrayXd abs_pow(const Eigen::ArrayXcd& u, double p);

/// Sixth-order Lagrange resampling at arbitrary radii.  Points are evenly
/// mirrored through the origin and taken as zero beyond r_max.
Eigen::ArrayXcd resample(const ComplexRadialField& f, const Eigen::ArrayXd& radii);

}  // namespace nls2d
