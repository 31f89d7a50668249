#pragma once

#include <span>
#include <utility>
#include <vector>

#include "bohmflux/stationary2d.hpp"

namespace bohmflux {

enum class FitMethod { QuadraticSmallX, ArcsinLinearized };
const char* fit_method_name(FitMethod m);

struct SpeedFit {
  double v = 0.0;
  double x_min = 0.0, x_max = 0.0;
  double residual_rms = 0.0;
  FitMethod method = FitMethod::QuadraticSmallX;
};

// Relative auxiliary-guide population |c_a|^2 / (|c_a|^2 + |c_m|^2); for
// Gamma = 0 in the evanescent regime this is sinh^2(kappa1 x) /
// (1 + 2 sinh^2(kappa1 x)).
double population_ratio(const Field2D& fld, double x);
double population_ratio(const Wavevectors& kv, double x);

// Extracts the operational speed from rho_a(x) = sin^2(J0 x / v).
// QuadraticSmallX: least-squares slope of sqrt(rho) vs x (window rho < 0.05).
// ArcsinLinearized: slope of arcsin(sqrt(rho)) vs x (window rho < 0.95).
SpeedFit fit_speed(std::span<const std::pair<double, double>> samples, double J0,
                   FitMethod method, double noise_tol = 1e-6);

// v = 2 J0 / (kappa_- - kappa_+), the differential attenuation of the
// symmetric and antisymmetric modes. Requires Delta < -J0.
double closed_form_speed(double Delta, const CavityParams& p);

struct SpeedPoint {
  double delta = 0.0;
  double v_closed = 0.0;
  double v_fit = 0.0;
  double v_bohm_leak = 0.0;
};

// Energy-speed table contrasting the operational speed with the Bohmian
// leakage drift at each Delta (all deltas must be evanescent).
std::vector<SpeedPoint> speed_curve(std::span<const double> deltas,
                                    const CavityParams& p);

}  // namespace bohmflux
