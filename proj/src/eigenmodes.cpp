#include "bohmflux/eigenmodes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace bohmflux {

PotentialGrid build_double_well(const DoubleWellGeometry& g, const GridSpec& grid) {
  if (g.well_width <= 0 || g.separation <= g.well_width)
    throw std::invalid_argument("double well: need separation > well_width > 0");
  if (grid.N < 501) throw std::invalid_argument("double well: N >= 501 required");
  if (grid.L_y <= 0.5 * g.separation + 0.5 * g.well_width)
    throw std::invalid_argument("double well: domain does not contain the wells");

  PotentialGrid pot;
  pot.h = 2.0 * grid.L_y / (grid.N - 1);
  if (g.well_width / pot.h < 20.0)
    throw std::invalid_argument("double well: grid too coarse (< 20 points per well)");

  pot.y.resize(grid.N);
  pot.V.resize(grid.N);
  const double c = 0.5 * g.separation;
  const double w = 0.5 * g.well_width;
  const double mid = 0.5 * (grid.N - 1);
  for (int i = 0; i < grid.N; ++i) {
    // Centered form keeps the grid (and hence V) exactly mirror-symmetric.
    const double y = (i - mid) * pot.h;
    pot.y[i] = y;
    // Cell-average the square wells over [y - h/2, y + h/2]: pointwise
    // sampling of the discontinuous edges would degrade the eigenvalue
    // convergence to first order. |y| keeps the values mirror-symmetric.
    const double u = std::abs(y);
    const double lo = std::max(u - 0.5 * pot.h, c - w);
    const double hi = std::min(u + 0.5 * pot.h, c + w);
    const double frac = std::clamp((hi - lo) / pot.h, 0.0, 1.0);
    pot.V[i] = g.V0 - frac * g.well_depth;
  }
  return pot;
}

void validate_potential(const PotentialGrid& pot) {
  const std::size_t n = pot.size();
  if (n < 3 || pot.V.size() != n) throw std::invalid_argument("potential: bad grid");
  double vmax = 0.0;
  for (double v : pot.V) vmax = std::max(vmax, std::abs(v));
  const double tol = 1e-12 * std::max(1.0, vmax);
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs((pot.y[i] - pot.y[i - 1]) - pot.h) > 1e-9 * pot.h)
      throw std::invalid_argument("potential: non-uniform grid");
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(pot.V[i] - pot.V[n - 1 - i]) > tol)
      throw std::invalid_argument("potential: V(y) != V(-y)");
}

int count_nodes(const std::vector<double>& phi) {
  double amax = 0.0;
  for (double v : phi) amax = std::max(amax, std::abs(v));
  const double floor = 1e-8 * amax;
  int nodes = 0;
  double prev = 0.0;
  for (double v : phi) {
    if (std::abs(v) < floor) continue;
    if (prev != 0.0 && v * prev < 0.0) ++nodes;
    prev = v;
  }
  return nodes;
}

namespace {

// Number of eigenvalues of the symmetric tridiagonal matrix (diag d, constant
// off-diagonal e) strictly below lambda, by the Sturm sequence.
int sturm_count(const std::vector<double>& d, double e, double lambda) {
  const double e2 = e * e;
  int count = 0;
  bool first = true;
  double q = 0.0;
  for (double di : d) {
    if (first) {
      q = di - lambda;
      first = false;
    } else {
      q = (q != 0.0) ? di - lambda - e2 / q
                     : di - lambda - std::abs(e) / std::numeric_limits<double>::epsilon();
    }
    if (q < 0.0) ++count;
  }
  return count;
}

// k-th smallest eigenvalue (k is 1-based) by bisection.
double bisect_eigenvalue(const std::vector<double>& d, double e, int k) {
  double lo = *std::min_element(d.begin(), d.end()) - 2.0 * std::abs(e);
  double hi = *std::max_element(d.begin(), d.end()) + 2.0 * std::abs(e);
  const double scale = std::max(std::abs(lo), std::abs(hi));
  while (hi - lo > 1e-15 * scale) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (sturm_count(d, e, mid) >= k)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// Solve (T - lambda I) x = b with partial pivoting (tridiagonal LU picks up a
// second superdiagonal).
void shifted_tridiag_solve(const std::vector<double>& d, double e, double lambda,
                           std::vector<double>& x) {
  const std::size_t n = d.size();
  std::vector<double> a(n), b(n, 0.0), c(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) a[i] = d[i] - lambda;
  for (std::size_t i = 0; i + 1 < n; ++i) b[i] = e;  // superdiag
  std::vector<double> sub(n, e);                     // subdiag entries below row i

  for (std::size_t i = 0; i + 1 < n; ++i) {
    double piv = a[i], low = sub[i];
    if (std::abs(low) > std::abs(piv)) {
      std::swap(a[i], sub[i]);
      std::swap(b[i], a[i + 1]);
      std::swap(c[i], b[i + 1]);
      std::swap(x[i], x[i + 1]);
      piv = a[i];
      low = sub[i];
    }
    if (piv == 0.0) piv = a[i] = std::numeric_limits<double>::epsilon();
    const double mult = low / piv;
    a[i + 1] -= mult * b[i];
    b[i + 1] -= mult * c[i];
    x[i + 1] -= mult * x[i];
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double s = x[ii];
    if (ii + 1 < n) s -= b[ii] * x[ii + 1];
    if (ii + 2 < n) s -= c[ii] * x[ii + 2];
    double piv = a[ii];
    if (piv == 0.0) piv = std::numeric_limits<double>::epsilon();
    x[ii] = s / piv;
  }
}

std::vector<double> inverse_iteration(const std::vector<double>& d, double e,
                                      double lambda) {
  const std::size_t n = d.size();
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 1e-3 * std::sin(0.37 * (i + 1));
  for (int it = 0; it < 5; ++it) {
    shifted_tridiag_solve(d, e, lambda, v);
    double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    for (double& x : v) x /= norm;
  }
  return v;
}

void symmetrize_parity(std::vector<double>& phi, int parity) {
  const std::size_t n = phi.size();
  for (std::size_t i = 0; i < n / 2; ++i) {
    const double s = 0.5 * (phi[i] + parity * phi[n - 1 - i]);
    phi[i] = s;
    phi[n - 1 - i] = parity * s;
  }
  if (n % 2 == 1 && parity == -1) phi[n / 2] = 0.0;
}

}  // namespace

ModeBasis solve_modes(const PotentialGrid& pot, double m) {
  validate_potential(pot);
  const std::size_t N = pot.size();
  const std::size_t n = N - 2;  // interior points, Dirichlet ends
  const double h = pot.h;
  const double off = -1.0 / (2.0 * m * h * h);

  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = 1.0 / (m * h * h) + pot.V[i + 1];

  const double E1 = bisect_eigenvalue(d, off, 1);
  const double E2 = bisect_eigenvalue(d, off, 2);
  std::vector<double> v1 = inverse_iteration(d, off, E1);
  std::vector<double> v2 = inverse_iteration(d, off, E2);

  // The span of the lowest doublet is parity-invariant, the ground state is
  // nodeless hence symmetric, and the first excited state antisymmetric. The
  // doublet gap can be tiny, so inverse iteration may return parity-mixed (or,
  // when the gap is at rounding level, even coinciding) vectors within the
  // doublet span; recover each parity eigenvector by projecting within it.
  auto parity_project = [&](int parity) {
    std::vector<double> best;
    double best_norm = -1.0;
    for (const auto* v : {&v1, &v2}) {
      std::vector<double> r(n);
      for (std::size_t i = 0; i < n; ++i)
        r[i] = 0.5 * ((*v)[i] + parity * (*v)[n - 1 - i]);
      const double nrm =
          std::sqrt(std::inner_product(r.begin(), r.end(), r.begin(), 0.0));
      if (nrm > best_norm) {
        best_norm = nrm;
        best = std::move(r);
      }
    }
    if (best_norm < 0.35)
      throw std::runtime_error(
          "solve_modes: lowest states are not a symmetric/antisymmetric pair");
    for (double& x : best) x /= best_norm;
    return best;
  };
  std::vector<double> v_sym = parity_project(+1);
  std::vector<double> v_anti = parity_project(-1);
  v1 = std::move(v_sym);
  v2 = std::move(v_anti);

  ModeBasis basis;
  basis.y = pot.y;
  basis.h = h;
  basis.E_minus = E1;
  basis.E_plus = E2;

  auto embed = [&](const std::vector<double>& v) {
    std::vector<double> phi(N, 0.0);
    std::copy(v.begin(), v.end(), phi.begin() + 1);
    double norm2 = 0.0;
    for (double x : phi) norm2 += x * x * h;
    const double s = 1.0 / std::sqrt(norm2);
    for (double& x : phi) x *= s;
    return phi;
  };
  basis.Phi_minus = embed(v1);
  basis.Phi_plus = embed(v2);

  if (count_nodes(basis.Phi_minus) != 0 || count_nodes(basis.Phi_plus) != 1)
    throw std::runtime_error("solve_modes: lowest states are not a 0/1-node doublet");

  // Parity check before snapping: ground symmetric, first excited antisymmetric.
  auto parity_defect = [&](const std::vector<double>& phi, int parity) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      num += std::pow(phi[i] - parity * phi[N - 1 - i], 2);
      den += phi[i] * phi[i];
    }
    return std::sqrt(num / den);
  };
  if (parity_defect(basis.Phi_minus, +1) > 1e-6 ||
      parity_defect(basis.Phi_plus, -1) > 1e-6)
    throw std::runtime_error("solve_modes: lowest states are not a symmetric/antisymmetric pair");
  symmetrize_parity(basis.Phi_minus, +1);
  symmetrize_parity(basis.Phi_plus, -1);

  // Sign conventions: Phi_minus >= 0 overall, Phi_plus > 0 at the main guide.
  double sum = std::accumulate(basis.Phi_minus.begin(), basis.Phi_minus.end(), 0.0);
  if (sum < 0)
    for (double& x : basis.Phi_minus) x = -x;

  return basis;
}

void hybridize(ModeBasis& basis) {
  const std::size_t N = basis.y.size();
  if (basis.Phi_plus.size() != N || basis.Phi_minus.size() != N)
    throw std::invalid_argument("hybridize: modes not computed");

  // Main guide sits on the y < 0 half-plane.
  double main_mass = 0.0;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  auto half_mass = [&](const std::vector<double>& phi) {
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i)
      if (basis.y[i] < 0.0) s += phi[i] * phi[i] * basis.h;
    return s;
  };

  basis.Phi_m.resize(N);
  basis.Phi_a.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    basis.Phi_m[i] = inv_sqrt2 * (basis.Phi_minus[i] + basis.Phi_plus[i]);
    basis.Phi_a[i] = inv_sqrt2 * (basis.Phi_minus[i] - basis.Phi_plus[i]);
  }
  main_mass = half_mass(basis.Phi_m);
  if (main_mass < 0.5) {
    // Flip the antisymmetric mode so Phi_m lands in the main guide.
    for (std::size_t i = 0; i < N; ++i) {
      std::swap(basis.Phi_m[i], basis.Phi_a[i]);
    }
    main_mass = half_mass(basis.Phi_m);
  }
  if (main_mass < 0.90 || half_mass(basis.Phi_a) > 0.10)
    throw std::runtime_error("hybridize: guide-mode localization below 90%");

  basis.y_main = 0.0;
  basis.y_aux = 0.0;
  double pm = 0.0, pa = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    if (std::abs(basis.Phi_m[i]) > pm) { pm = std::abs(basis.Phi_m[i]); basis.y_main = basis.y[i]; }
    if (std::abs(basis.Phi_a[i]) > pa) { pa = std::abs(basis.Phi_a[i]); basis.y_aux = basis.y[i]; }
  }
}

DoubleWellGeometry calibrate_J0(double target_J0, DoubleWellGeometry g,
                                const GridSpec& grid, double m, double rel_tol,
                                ModeBasis* out) {
  if (target_J0 <= 0) throw std::invalid_argument("calibrate_J0: target must be > 0");

  auto splitting = [&](double depth) {
    DoubleWellGeometry gg = g;
    gg.well_depth = depth;
    return solve_modes(build_double_well(gg, grid), m).J0_eff();
  };

  // Splitting decreases with depth; bracket by doubling/halving.
  double lo = g.well_depth > 0 ? g.well_depth : 1e-3;
  double hi = lo;
  double J_lo = splitting(lo);
  for (int it = 0; it < 60 && J_lo < target_J0; ++it) { lo *= 0.5; J_lo = splitting(lo); }
  double J_hi = splitting(hi);
  for (int it = 0; it < 60 && J_hi > target_J0; ++it) { hi *= 2.0; J_hi = splitting(hi); }
  if (J_lo < target_J0 || J_hi > target_J0)
    throw std::runtime_error("calibrate_J0: failed to bracket target splitting");

  double depth = lo;
  for (int it = 0; it < 200; ++it) {
    depth = std::sqrt(lo * hi);
    const double J = splitting(depth);
    if (std::abs(J / target_J0 - 1.0) < 0.2 * rel_tol) break;
    if (J > target_J0)
      lo = depth;
    else
      hi = depth;
  }
  g.well_depth = depth;
  ModeBasis basis = solve_modes(build_double_well(g, grid), m);
  if (std::abs(basis.J0_eff() / target_J0 - 1.0) > rel_tol)
    throw std::runtime_error("calibrate_J0: did not converge to target within tolerance");
  hybridize(basis);
  if (out) *out = std::move(basis);
  return g;
}

}  // namespace bohmflux
