#pragma once

#include <vector>

namespace bohmflux {

// Uniform y-grid with Dirichlet boundaries and a symmetric double-well
// potential sampled on it.
struct PotentialGrid {
  std::vector<double> y;
  std::vector<double> V;
  double h = 0.0;

  std::size_t size() const { return y.size(); }
};

struct DoubleWellGeometry {
  double well_depth = 0.0;   // depth below the V0 plateau
  double well_width = 0.0;
  double separation = 0.0;   // center-to-center
  double V0 = 0.0;           // plateau level
};

struct GridSpec {
  double L_y = 0.0;  // domain is [-L_y, L_y]
  int N = 0;
};

// Transverse eigenpair plus the hybridized per-guide modes. Mode profiles are
// normalized with the trapezoidal rule, sum |Phi|^2 h = 1. The main guide is
// centered at y = -separation/2, the auxiliary one at +separation/2.
struct ModeBasis {
  std::vector<double> y;
  double h = 0.0;
  std::vector<double> Phi_plus, Phi_minus;  // antisymmetric / symmetric
  double E_plus = 0.0, E_minus = 0.0;
  std::vector<double> Phi_m, Phi_a;  // hybridized guide modes (may be empty)
  double y_main = 0.0, y_aux = 0.0;

  double J0_eff() const { return 0.5 * (E_plus - E_minus); }
  double E0_eff() const { return 0.5 * (E_plus + E_minus); }
};

PotentialGrid build_double_well(const DoubleWellGeometry& g, const GridSpec& grid);

// Checks uniform spacing and V(y) = V(-y); throws if violated.
void validate_potential(const PotentialGrid& pot);

// Two lowest eigenpairs of the 3-point finite-difference Hamiltonian
// -(1/2m) d^2/dy^2 + V(y), via Sturm-sequence bisection + inverse iteration.
// Throws if the pair is not a symmetric/antisymmetric doublet.
ModeBasis solve_modes(const PotentialGrid& pot, double m);

// Fills Phi_m = (Phi_minus + Phi_plus)/sqrt(2) and Phi_a = (Phi_minus -
// Phi_plus)/sqrt(2), with signs fixed so both are positive at their guide
// centers. Throws if either mode carries < 90% of its norm on its half-plane.
void hybridize(ModeBasis& basis);

// Bisection on well_depth until J0_eff matches target_J0 within rel_tol.
// Returns the calibrated geometry; the matching basis is written to *out if
// non-null.
DoubleWellGeometry calibrate_J0(double target_J0, DoubleWellGeometry g,
                                const GridSpec& grid, double m,
                                double rel_tol = 5e-3, ModeBasis* out = nullptr);

// Interior sign changes, ignoring samples below 1e-8 of the max amplitude.
int count_nodes(const std::vector<double>& phi);

}  // namespace bohmflux
