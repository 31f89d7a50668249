#include "bohmflux/wavepacket.hpp"

#include <cmath>
#include <stdexcept>

namespace bohmflux {

PacketSpec PacketSpec::make(double E0, double sigma, double V0, double m) {
  PacketSpec s;
  s.E0 = E0;
  s.sigma = sigma;
  s.V0 = V0;
  s.m = m;
  const double depth = V0 - E0 + m;
  if (depth <= 0)
    throw std::invalid_argument("PacketSpec: E0 not evanescent (V0 - E0 + m <= 0)");
  if (sigma <= 0) throw std::invalid_argument("PacketSpec: sigma must be > 0");
  s.k0 = std::sqrt(2.0 * m * depth);
  s.L = 1.0 / s.k0;
  return s;
}

PacketSpec PacketSpec::make(const CavityParams& p) {
  return make(p.E0, p.sigma, p.V0, p.m);
}

namespace {

// Orthonormal Hermite recurrence wrt exp(-u^2) du:
// pi_{k+1} = u sqrt(2/(k+1)) pi_k - sqrt(k/(k+1)) pi_{k-1}.
double hermite_ortho(int n, double u, double* sum_sq = nullptr) {
  double pkm1 = 0.0;
  double pk = std::pow(M_PI, -0.25);
  double s = pk * pk;
  for (int k = 0; k < n; ++k) {
    const double pkp1 =
        u * std::sqrt(2.0 / (k + 1)) * pk - std::sqrt(double(k) / (k + 1)) * pkm1;
    pkm1 = pk;
    pk = pkp1;
    if (k + 1 < n) s += pk * pk;
  }
  if (sum_sq) *sum_sq = s;
  return pk;
}

}  // namespace

HermiteRule gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: n >= 1");
  HermiteRule rule;
  rule.nodes.reserve(n);
  rule.weights.reserve(n);

  // Roots of pi_n by scan + bisection; all lie inside +-sqrt(2n+1).
  const double bound = std::sqrt(2.0 * n + 1.0) + 1.0;
  const int scan = 40 * n;
  double prev_u = -bound;
  double prev_p = hermite_ortho(n, prev_u);
  for (int i = 1; i <= scan; ++i) {
    const double u = -bound + 2.0 * bound * i / scan;
    const double p = hermite_ortho(n, u);
    if (prev_p == 0.0) {
      rule.nodes.push_back(prev_u);
    } else if (p * prev_p < 0.0) {
      double a = prev_u, b = u, fa = prev_p;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = hermite_ortho(n, mid);
        if (fm == 0.0) { a = b = mid; break; }
        if (fa * fm < 0.0) b = mid;
        else { a = mid; fa = fm; }
      }
      rule.nodes.push_back(0.5 * (a + b));
    }
    prev_u = u;
    prev_p = p;
  }
  if (static_cast<int>(rule.nodes.size()) != n)
    throw std::runtime_error("gauss_hermite: root scan failed");

  // Christoffel weights: w_i = 1 / sum_{k<n} pi_k(u_i)^2.
  for (double u : rule.nodes) {
    double s = 0.0;
    hermite_ortho(n, u, &s);
    rule.weights.push_back(1.0 / s);
  }
  return rule;
}

std::complex<double> packet_first_order(double x, double t, const PacketSpec& s) {
  const std::complex<double> i(0.0, 1.0);
  const std::complex<double> arg = i * t - s.m * x / s.k0;
  return std::exp(s.sigma * s.sigma * arg * arg) * std::exp(-i * s.E0 * t) *
         std::exp(-s.k0 * x);
}

std::complex<double> packet_quadrature(double x, double t, const PacketSpec& s,
                                       int nodes) {
  if (nodes < 32) throw std::invalid_argument("packet_quadrature: nodes >= 32");
  // Gaussian mass above the barrier top E > V0 + m must be negligible for the
  // evanescent-only ansatz.
  const double truncated = 0.5 * std::erfc(s.barrier_depth() / (2.0 * s.sigma));
  if (truncated > 1e-6)
    throw std::runtime_error("packet_quadrature: spectrum truncation exceeds 1e-6");

  static thread_local HermiteRule cached;
  static thread_local int cached_n = -1;
  if (cached_n != nodes) {
    cached = gauss_hermite(nodes);
    cached_n = nodes;
  }

  // E = E0 + 2 sigma u maps g(E) dE onto the exp(-u^2) weight.
  const std::complex<double> i(0.0, 1.0);
  std::complex<double> acc(0.0, 0.0);
  for (int j = 0; j < nodes; ++j) {
    const double E = s.E0 + 2.0 * s.sigma * cached.nodes[j];
    const double depth = s.V0 - E + s.m;
    if (depth <= 0) continue;  // outside the evanescent support
    const double kE = std::sqrt(2.0 * s.m * depth);
    acc += cached.weights[j] * std::exp(-i * (E - s.E0) * t) * std::exp(-kE * x);
  }
  // Normalize so the sigma->0 limit is exp(-k0 x); the overall Gaussian-mass
  // factor cancels in all velocity ratios anyway.
  double wsum = 0.0;
  for (double w : cached.weights) wsum += w;
  return acc / wsum * std::exp(-i * s.E0 * t);
}

double packet_velocity(double /*x*/, double t, const PacketSpec& s) {
  return -2.0 * s.sigma * s.sigma * t / s.k0;
}

double penetration_distance(const PacketSpec& s) { return s.L; }

Trajectory1D packet_trajectory(double x0, double t_start, double t_end, int steps,
                               const PacketSpec& s) {
  if (x0 < 0) throw std::invalid_argument("packet_trajectory: x0 >= 0 required");
  if (steps < 1) throw std::invalid_argument("packet_trajectory: steps >= 1");
  Trajectory1D traj;
  traj.t.reserve(steps + 1);
  traj.x.reserve(steps + 1);
  traj.v.reserve(steps + 1);
  const double dt = (t_end - t_start) / steps;
  const double a = s.sigma * s.sigma / s.k0;
  for (int i = 0; i <= steps; ++i) {
    const double t = t_start + i * dt;
    traj.t.push_back(t);
    traj.x.push_back(x0 - a * (t * t - t_start * t_start));
    traj.v.push_back(packet_velocity(0.0, t, s));
  }
  return traj;
}

}  // namespace bohmflux
