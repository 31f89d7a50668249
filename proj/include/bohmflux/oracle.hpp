#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "bohmflux/eigenmodes.hpp"
#include "bohmflux/stationary2d.hpp"

namespace bohmflux::oracle {

// Full-matrix symmetric eigendecomposition of the same finite-difference
// Hamiltonian as solve_modes; brute-force cross-check, N <= 5000.
ModeBasis dense_eigensolve(const PotentialGrid& pot, double m);

using Psi1D = std::function<std::complex<double>(double)>;
using Psi2D = std::function<std::complex<double>(double, double)>;
using Vel2D = std::function<std::array<double, 2>(double, double)>;

// Central-difference Im[grad psi / psi] / m. Throws at nodal points.
double fd_phase_gradient(const Psi1D& psi, double x, double h, double m);
std::array<double, 2> fd_phase_gradient(const Psi2D& psi, double x, double y,
                                        double h, double m);

// 1D grid state for Crank-Nicolson propagation under
// H = -d^2/dx^2 / 2m + V(x), V complex (dissipative).
struct GridState1D {
  std::vector<double> x;
  std::vector<std::complex<double>> psi;
  std::vector<std::complex<double>> V;
  double m = 1.0;
  double t = 0.0;
  double h = 0.0;

  double norm() const;  // trapezoidal integral of |psi|^2
};

GridState1D make_grid_state(double x_min, double x_max, int N, double m);

// Polynomial imaginary absorber over the outer width_frac of each edge.
void add_absorber(GridState1D& state, double width_frac, double strength);

// Crank-Nicolson stepper. Throws on the stability precondition
// dt * max|V| >= 0.5 and on detected norm growth with purely real V.
void tdse_propagate(GridState1D& state, double dt, int steps);

// div j + Gamma |Psi|^2 by central differences on the grid interior,
// j = |Psi|^2 v. The generic kernel behind stationary2d::continuity_residual.
ContinuityReport continuity_grid_check(const Psi2D& psi, const Vel2D& vel,
                                       double Gamma, const GridSpec2D& grid);

}  // namespace bohmflux::oracle
