#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "bohmflux/eigenmodes.hpp"
#include "bohmflux/params.hpp"

namespace bohmflux {

// Complex wavevectors of the hybridized pair. Branch: Im k >= 0 so e^{ikx}
// decays for x -> +infinity. k_+ pairs with the symmetric transverse level
// V0 - 2 J0 (slow longitudinal decay), k_- with the antisymmetric level V0
// (fast decay); both depend on the energy only through Delta and J0. Note the
// exact product is k1 k2 = -m J0.
struct Wavevectors {
  std::complex<double> k_plus, k_minus;
  std::complex<double> k1, k2;  // (k_- -+ k_+)/2
  bool degenerate = false;

  // Real decay constants for Gamma = 0, Delta < -J0 (k1 = i kappa1 etc.).
  double kappa1() const { return k1.imag(); }
  double kappa2() const { return k2.imag(); }
};

Wavevectors wavevectors(double E, const CavityParams& p, double gamma);

// Smooth transverse mode evaluators with derivatives; either sampled modes
// (cubic Hermite interpolation of a ModeBasis) or analytic Gaussians.
struct ModePair {
  std::function<double(double)> phi_m, dphi_m, phi_a, dphi_a;
  double y_min = 0.0, y_max = 0.0;
  double y_main = 0.0, y_aux = 0.0;
  double phi_peak = 0.0;  // max |phi_m|, sets the nodal floor
};

ModePair grid_modes(const ModeBasis& basis);
ModePair gaussian_modes(double separation, double width);

// Stationary hybridized field Psi(x,y) = A e^{i k2 x} [cos(k1 x) Phi_m(y)
// - i sin(k1 x) Phi_a(y)] on x >= 0, with its Bohmian velocity field.
class Field2D {
 public:
  Field2D(const Wavevectors& kv, ModePair modes, double m, double gamma);

  std::complex<double> value(double x, double y) const;

  struct Velocity {
    double vx = 0.0, vy = 0.0;
    bool singular = false;
  };
  Velocity velocity(double x, double y) const;

  // Mode coefficients without the shared e^{i k2 x} factor.
  std::complex<double> coeff_main(double x) const;
  std::complex<double> coeff_aux(double x) const;

  const Wavevectors& wavevectors() const { return kv_; }
  const ModePair& modes() const { return modes_; }
  double mass() const { return m_; }
  double gamma() const { return gamma_; }
  double nodal_floor() const { return floor_; }
  // Shortest spatial scale of the x-dependence, used for step-size checks.
  double characteristic_length() const;

 private:
  Wavevectors kv_;
  ModePair modes_;
  double m_;
  double gamma_;
  double floor_;
};

// Perturbative leakage drift (Gamma/2m) / v_Delta with v_Delta =
// sqrt(-2 Delta / m). Requires Delta < -J0 and Gamma/m < 1e-2.
double leakage_velocity_estimate(double Delta, const CavityParams& p);

struct GridSpec2D {
  double x0 = 0.0, x1 = 0.0;
  int nx = 0;
  double y0 = 0.0, y1 = 0.0;
  int ny = 0;
};

struct ContinuityReport {
  double max_residual = 0.0;   // max |div j + Gamma |Psi|^2|
  double l2_residual = 0.0;
  double normalization = 0.0;  // max Gamma |Psi|^2 over the grid
  double max_normalized() const;
  double l2_normalized() const;
};

// div j + Gamma |Psi|^2 by central differences on the interior of the grid.
ContinuityReport continuity_residual(const Field2D& fld, const GridSpec2D& grid);

}  // namespace bohmflux
