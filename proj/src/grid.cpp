#include "nls2d/grid.hpp"

#include <cmath>

namespace nls2d {

namespace {

// 3x3 Cramer solve in long double; the Vandermonde here is well conditioned
// (three adjacent nodes).
void solve3(const long double A[3][3], const long double b[3], double x[3]) {
  auto det3 = [](const long double M[3][3]) {
    return M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) -
           M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
           M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
  };
  const long double det = det3(A);
  for (int j = 0; j < 3; ++j) {
    long double M[3][3];
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) M[i][k] = (k == j) ? b[i] : A[i][k];
    x[j] = static_cast<double>(det3(M) / det);
  }
}

}  // namespace

GridPtr make_grid(double r_max, Eigen::Index n) {
  if (!(r_max > 0.0) || !std::isfinite(r_max))
    throw InvalidArgument("make_grid: r_max must be positive and finite");
  if (n < 16) throw InvalidArgument("make_grid: need at least 16 nodes");

  auto g = std::make_shared<RadialGrid>();
  g->r_max = r_max;
  g->n = n;
  g->h = r_max / (static_cast<double>(n) - 0.5);
  g->nodes = (Eigen::ArrayXd::LinSpaced(n, 1.0, static_cast<double>(n)) - 0.5) * g->h;
  g->nodes(n - 1) = r_max;  // exact, independent of rounding in h

  const double pi = M_PI;
  const double h = g->h;

  // exact cell volumes; the last cell is truncated at r_max so the tiling
  // covers the disk exactly
  g->volumes.resize(n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    const double rl = (static_cast<double>(k) - 1.0) * h;
    const double rr = (k == n) ? r_max : static_cast<double>(k) * h;
    g->volumes(k - 1) = pi * (rr - rl) * (rr + rl);
  }

  // Quadrature weights: volumes plus endpoint corrections.  The midpoint-type
  // volume rule carries an O(h^2) defect proportional to g(0) (the measure
  // vanishes at the origin); subtracting (pi h^2/12) times an even-quadratic
  // estimate of g(0) removes it.  Three outer deltas then restore exactness
  // on {1, r, r^2}.
  g->weights = g->volumes;
  const double c = pi * h * h / 12.0;
  const double d1 = -c * 9.0 / 8.0;
  const double d2 = c / 8.0;
  g->weights(0) += d1;
  g->weights(1) += d2;

  long double e1 = 0.0L, e2 = 0.0L;
  for (Eigen::Index k = 0; k < n; ++k) {
    const long double v = g->volumes(k);
    const long double r = g->nodes(k);
    e1 += v * r;
    e2 += v * r * r;
  }
  const long double rm = r_max;
  e1 -= 2.0L * static_cast<long double>(pi) * rm * rm * rm / 3.0L;
  e2 -= static_cast<long double>(pi) * rm * rm * rm * rm / 2.0L;

  const double ra = g->nodes(n - 3), rb = g->nodes(n - 2), rc = g->nodes(n - 1);
  const long double A[3][3] = {{1.0L, 1.0L, 1.0L},
                               {ra, rb, rc},
                               {static_cast<long double>(ra) * ra,
                                static_cast<long double>(rb) * rb,
                                static_cast<long double>(rc) * rc}};
  const long double b[3] = {
      -static_cast<long double>(d1 + d2),
      -e1 - (static_cast<long double>(d1) * g->nodes(0) +
             static_cast<long double>(d2) * g->nodes(1)),
      -e2 - (static_cast<long double>(d1) * g->nodes(0) * g->nodes(0) +
             static_cast<long double>(d2) * g->nodes(1) * g->nodes(1))};
  double x[3];
  solve3(A, b, x);
  g->weights(n - 3) += x[0];
  g->weights(n - 2) += x[1];
  g->weights(n - 1) += x[2];
  return g;
}

}  // namespace nls2d
