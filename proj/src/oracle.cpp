#include "bohmflux/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bohmflux::oracle {

ModeBasis dense_eigensolve(const PotentialGrid& pot, double m) {
  validate_potential(pot);
  const int N = static_cast<int>(pot.size());
  if (N > 5000) throw std::invalid_argument("dense_eigensolve: N <= 5000");
  const int n = N - 2;
  const double h = pot.h;
  const double off = -1.0 / (2.0 * m * h * h);

  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    H(i, i) = 1.0 / (m * h * h) + pot.V[i + 1];
    if (i + 1 < n) {
      H(i, i + 1) = off;
      H(i + 1, i) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("dense_eigensolve: eigensolver failed");

  ModeBasis basis;
  basis.y = pot.y;
  basis.h = h;
  basis.E_minus = es.eigenvalues()(0);
  basis.E_plus = es.eigenvalues()(1);
  auto embed = [&](int col) {
    std::vector<double> phi(N, 0.0);
    double norm2 = 0.0;
    for (int i = 0; i < n; ++i) {
      phi[i + 1] = es.eigenvectors()(i, col);
      norm2 += phi[i + 1] * phi[i + 1] * h;
    }
    const double s = 1.0 / std::sqrt(norm2);
    for (double& v : phi) v *= s;
    return phi;
  };
  basis.Phi_minus = embed(0);
  basis.Phi_plus = embed(1);
  double sum = 0.0;
  for (double v : basis.Phi_minus) sum += v;
  if (sum < 0)
    for (double& v : basis.Phi_minus) v = -v;
  return basis;
}

double fd_phase_gradient(const Psi1D& psi, double x, double h, double m) {
  const std::complex<double> p0 = psi(x);
  if (std::norm(p0) == 0.0)
    throw std::runtime_error("fd_phase_gradient: nodal point");
  const std::complex<double> grad = (psi(x + h) - psi(x - h)) / (2.0 * h);
  return (grad / p0).imag() / m;
}

std::array<double, 2> fd_phase_gradient(const Psi2D& psi, double x, double y,
                                        double h, double m) {
  const std::complex<double> p0 = psi(x, y);
  if (std::norm(p0) == 0.0)
    throw std::runtime_error("fd_phase_gradient: nodal point");
  const std::complex<double> gx = (psi(x + h, y) - psi(x - h, y)) / (2.0 * h);
  const std::complex<double> gy = (psi(x, y + h) - psi(x, y - h)) / (2.0 * h);
  return {(gx / p0).imag() / m, (gy / p0).imag() / m};
}

double GridState1D::norm() const {
  double s = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double w = (i == 0 || i + 1 == psi.size()) ? 0.5 : 1.0;
    s += w * std::norm(psi[i]) * h;
  }
  return s;
}

GridState1D make_grid_state(double x_min, double x_max, int N, double m) {
  if (N < 3) throw std::invalid_argument("make_grid_state: N >= 3");
  GridState1D st;
  st.m = m;
  st.h = (x_max - x_min) / (N - 1);
  st.x.resize(N);
  st.psi.assign(N, {0.0, 0.0});
  st.V.assign(N, {0.0, 0.0});
  for (int i = 0; i < N; ++i) st.x[i] = x_min + i * st.h;
  return st;
}

void add_absorber(GridState1D& state, double width_frac, double strength) {
  const int N = static_cast<int>(state.x.size());
  const int w = std::max(2, static_cast<int>(width_frac * N));
  for (int i = 0; i < N; ++i) {
    const int edge = std::min(i, N - 1 - i);
    if (edge < w) {
      const double d = double(w - edge) / w;
      state.V[i] -= std::complex<double>(0.0, strength * d * d * d);
    }
  }
}

void tdse_propagate(GridState1D& state, double dt, int steps) {
  const int N = static_cast<int>(state.x.size());
  const int n = N - 2;  // Dirichlet ends
  double vmax = 0.0;
  bool real_V = true;
  for (auto& v : state.V) {
    vmax = std::max(vmax, std::abs(v));
    if (v.imag() != 0.0) real_V = false;
  }
  if (dt * vmax >= 0.5)
    throw std::invalid_argument("tdse_propagate: dt * max|V| >= 0.5");

  const std::complex<double> i_half_dt(0.0, 0.5 * dt);
  const double lap = 1.0 / (2.0 * state.m * state.h * state.h);
  // H = tridiag(-lap, 2 lap + V_i, -lap) on interior points.
  std::vector<std::complex<double>> diagL(n), diagR(n);
  for (int j = 0; j < n; ++j) {
    const std::complex<double> Hd = 2.0 * lap + state.V[j + 1];
    diagL[j] = 1.0 + i_half_dt * Hd;   // (1 + i H dt/2)
    diagR[j] = 1.0 - i_half_dt * Hd;
  }
  const std::complex<double> offL = i_half_dt * (-lap);
  const std::complex<double> offR = -i_half_dt * (-lap);

  std::vector<std::complex<double>> rhs(n), cp(n), dp(n);
  const double norm0 = state.norm();
  for (int s = 0; s < steps; ++s) {
    for (int j = 0; j < n; ++j) {
      rhs[j] = diagR[j] * state.psi[j + 1];
      if (j > 0) rhs[j] += offR * state.psi[j];
      if (j + 1 < n) rhs[j] += offR * state.psi[j + 2];
    }
    // Thomas algorithm.
    cp[0] = offL / diagL[0];
    dp[0] = rhs[0] / diagL[0];
    for (int j = 1; j < n; ++j) {
      const std::complex<double> denom = diagL[j] - offL * cp[j - 1];
      cp[j] = offL / denom;
      dp[j] = (rhs[j] - offL * dp[j - 1]) / denom;
    }
    state.psi[n] = dp[n - 1];
    for (int j = n - 2; j >= 0; --j) state.psi[j + 1] = dp[j] - cp[j] * state.psi[j + 2];
    state.t += dt;

    if (real_V && state.norm() > norm0 * (1.0 + 1e-6 * (s + 1)))
      throw std::runtime_error("tdse_propagate: norm growth detected (instability)");
  }
}

ContinuityReport continuity_grid_check(const Psi2D& psi, const Vel2D& vel,
                                       double Gamma, const GridSpec2D& grid) {
  if (grid.nx < 3 || grid.ny < 3)
    throw std::invalid_argument("continuity_grid_check: grid too small");
  const double hx = (grid.x1 - grid.x0) / (grid.nx - 1);
  const double hy = (grid.y1 - grid.y0) / (grid.ny - 1);

  // j = |psi|^2 v on the full grid.
  std::vector<double> jx(grid.nx * grid.ny), jy(grid.nx * grid.ny),
      rho(grid.nx * grid.ny);
#pragma omp parallel for schedule(static)
  for (int ix = 0; ix < grid.nx; ++ix) {
    for (int iy = 0; iy < grid.ny; ++iy) {
      const double x = grid.x0 + ix * hx;
      const double y = grid.y0 + iy * hy;
      const double r = std::norm(psi(x, y));
      const auto v = vel(x, y);
      const std::size_t k = std::size_t(ix) * grid.ny + iy;
      rho[k] = r;
      jx[k] = r * v[0];
      jy[k] = r * v[1];
    }
  }

  ContinuityReport rep;
  double sum_sq = 0.0;
  long count = 0;
  double norm = 0.0;
#pragma omp parallel for schedule(static) reduction(max : norm)
  for (int ix = 0; ix < grid.nx; ++ix)
    for (int iy = 0; iy < grid.ny; ++iy)
      norm = std::max(norm, Gamma * rho[std::size_t(ix) * grid.ny + iy]);
  rep.normalization = norm;

  double max_r = 0.0;
#pragma omp parallel for schedule(static) reduction(max : max_r) \
    reduction(+ : sum_sq, count)
  for (int ix = 1; ix < grid.nx - 1; ++ix) {
    for (int iy = 1; iy < grid.ny - 1; ++iy) {
      const std::size_t k = std::size_t(ix) * grid.ny + iy;
      const double div = (jx[k + grid.ny] - jx[k - grid.ny]) / (2.0 * hx) +
                         (jy[k + 1] - jy[k - 1]) / (2.0 * hy);
      const double r = std::abs(div + Gamma * rho[k]);
      max_r = std::max(max_r, r);
      sum_sq += r * r;
      ++count;
    }
  }
  rep.max_residual = max_r;
  rep.l2_residual = std::sqrt(sum_sq / count);
  return rep;
}

}  // namespace bohmflux::oracle
