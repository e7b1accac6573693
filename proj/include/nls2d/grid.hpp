#pragma once

#include <Eigen/Dense>
#include <memory>

#include "nls2d/errors.hpp"

namespace nls2d {

/// Uniform cell-centered radial grid for the measure 2*pi*r dr on [0, r_max].
///
/// Nodes sit at r_k = (k - 1/2) h, k = 1..n, with h = r_max / (n - 1/2), so
/// the last node lies exactly at r_max and no node touches the coordinate
/// singularity at r = 0.
///
/// Two discretizations of the measure are carried:
///  - `volumes`: the exact cell volumes of the tiling {[0,h], ..., [., r_max]}.
///    The evolution operator is built on these; its Crank-Nicolson step
///    conserves the volume-weighted norm exactly, so conserved quantities are
///    reported against them.
///  - `weights`: the quadrature rule used by integrate()/lp_norm.  These are
///    the volumes plus endpoint corrections that remove the O(h^2) boundary
///    defect of the midpoint-type rule at r = 0 and make the rule exact on
///    radial polynomials r^m, m <= 2.  Both sets are positive and sum to
///    pi r_max^2 exactly.
struct RadialGrid {
  double r_max = 0.0;
  Eigen::Index n = 0;
  double h = 0.0;
  Eigen::ArrayXd nodes;
  Eigen::ArrayXd weights;
  Eigen::ArrayXd volumes;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Builds the grid.  Requires r_max > 0 and n >= 16.
GridPtr make_grid(double r_max, Eigen::Index n);

/// Quadrature of a sampled integrand against the grid measure 2*pi*r dr.
/// Works for real or complex sample expressions.
template <class Derived>
typename Derived::Scalar integrate(const RadialGrid& g,
                                   const Eigen::ArrayBase<Derived>& samples) {
  return (g.weights.template cast<typename Derived::Scalar>() * samples).sum();
}

/// Same integral with the conserved cell-volume discretization.
template <class Derived>
typename Derived::Scalar integrate_volumes(
    const RadialGrid& g, const Eigen::ArrayBase<Derived>& samples) {
  return (g.volumes.template cast<typename Derived::Scalar>() * samples).sum();
}

/// True if the two fields/grids refer to the same discretization.
inline bool same_grid(const RadialGrid& a, const RadialGrid& b) {
  return a.n == b.n && a.r_max == b.r_max;
}

}  // namespace nls2d
