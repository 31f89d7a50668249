#pragma once

#include <complex>
#include <vector>

#include "bohmflux/params.hpp"

namespace bohmflux {

// Evanescent wave packet below the barrier top: dominant decay constant
// k0 = sqrt(2m(V0 - E0 + m)) and decay length L = 1/k0.
struct PacketSpec {
  double E0 = 0.0;
  double sigma = 0.0;
  double V0 = 0.0;
  double m = 1.0;
  double k0 = 0.0;
  double L = 0.0;

  static PacketSpec make(const CavityParams& p);
  static PacketSpec make(double E0, double sigma, double V0, double m);

  double barrier_depth() const { return V0 - E0 + m; }
};

// Gauss-Hermite rule for integrals of exp(-u^2) f(u).
struct HermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
HermiteRule gauss_hermite(int n);

// First-order-in-(E-E0) closed form: exp(sigma^2 (it - m x/k0)^2)
// * exp(-i E0 t) * exp(-k0 x), unnormalized.
std::complex<double> packet_first_order(double x, double t, const PacketSpec& s);

// Direct quadrature of int dE g(E) e^{-iEt} e^{-k_E x} over the evanescent
// energies E < V0 + m. Throws if the truncated Gaussian mass exceeds 1e-6.
std::complex<double> packet_quadrature(double x, double t, const PacketSpec& s,
                                       int nodes);

// Bohmian velocity of the first-order packet, v = -2 sigma^2 t / k0
// (x-independent).
double packet_velocity(double x, double t, const PacketSpec& s);

// Travel distance int_{-1/sigma}^{0} |v| dt = 1/k0 = L.
double penetration_distance(const PacketSpec& s);

struct Trajectory1D {
  std::vector<double> t, x, v;
};

// Closed-form parabolic trajectory x(t) = x0 - (sigma^2/k0)(t^2 - t_start^2).
Trajectory1D packet_trajectory(double x0, double t_start, double t_end, int steps,
                               const PacketSpec& s);

}  // namespace bohmflux
