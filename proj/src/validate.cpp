#include "bohmflux/validate.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "bohmflux/model.hpp"
#include "bohmflux/oracle.hpp"
#include "bohmflux/stationary2d.hpp"
#include "bohmflux/wavepacket.hpp"

namespace bohmflux {

namespace {

void check(std::vector<CheckResult>& out, const std::string& name, double value,
           double tol) {
  out.push_back({name, value < tol, value, tol});
}

void suite_eigen(std::vector<CheckResult>& out, const CavityParams& p) {
  // Tridiagonal vs dense eigensolve on the default well geometry.
  DoubleWellGeometry g{1e-2, p.well_width, p.guide_separation, p.V0};
  GridSpec grid{0.5 * p.guide_separation + 5.0 * p.well_width, 2001};
  const PotentialGrid pot = build_double_well(g, grid);
  const ModeBasis tri = solve_modes(pot, p.m);
  const ModeBasis dense = oracle::dense_eigensolve(pot, p.m);
  check(out, "eigen.tridiag_vs_dense_Eminus",
        std::abs(tri.E_minus / dense.E_minus - 1.0), 1e-9);
  check(out, "eigen.tridiag_vs_dense_Eplus",
        std::abs(tri.E_plus / dense.E_plus - 1.0), 1e-9);

  double overlap = 0.0, n_minus = 0.0, n_plus = 0.0;
  for (std::size_t i = 0; i < tri.y.size(); ++i) {
    overlap += tri.Phi_minus[i] * tri.Phi_plus[i] * tri.h;
    n_minus += tri.Phi_minus[i] * tri.Phi_minus[i] * tri.h;
    n_plus += tri.Phi_plus[i] * tri.Phi_plus[i] * tri.h;
  }
  check(out, "eigen.orthogonality", std::abs(overlap), 1e-10);
  check(out, "eigen.norm_minus", std::abs(n_minus - 1.0), 1e-10);
  check(out, "eigen.norm_plus", std::abs(n_plus - 1.0), 1e-10);

  // Particle in a box against the analytic spectrum.
  const double W = 20.0;
  PotentialGrid box;
  box.h = W / 4000;
  for (int i = 0; i <= 4000; ++i) {
    box.y.push_back(-0.5 * W + i * box.h);
    box.V.push_back(0.0);
  }
  const ModeBasis bm = solve_modes(box, p.m);
  const double E1 = M_PI * M_PI / (2.0 * p.m * W * W);
  check(out, "eigen.box_E1", std::abs(bm.E_minus / E1 - 1.0), 1e-3);
  check(out, "eigen.box_E2", std::abs(bm.E_plus / (4.0 * E1) - 1.0), 1e-3);
}

void suite_velocity(std::vector<CheckResult>& out, const CavityParams& p) {
  // 1D packet: closed form vs finite differences of Im[dx psi / psi]/m.
  const PacketSpec spec = PacketSpec::make(p);
  const double hfd = 1e-4 * spec.L;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ux(0.1 * spec.L, 3.0 * spec.L);
  std::uniform_real_distribution<double> ut(-1.0 / p.sigma, 1.0 / p.sigma);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double x = ux(rng), t = ut(rng);
    auto psi = [&](double xx) { return packet_first_order(xx, t, spec); };
    const double vfd = oracle::fd_phase_gradient(psi, x, hfd, p.m);
    const double v = packet_velocity(x, t, spec);
    const double scale = std::max(std::abs(v), 2.0 * p.sigma / spec.k0);
    worst = std::max(worst, std::abs(vfd - v) / scale);
  }
  check(out, "velocity.packet_fd_vs_closed", worst, 1e-6);

  // 2D leaky field with analytic Gaussian modes.
  const ModePair modes = gaussian_modes(p.guide_separation, p.well_width / 2.0);
  const double Delta = -2.0 * p.J0;
  const Wavevectors kv = wavevectors(energy_from_delta(Delta, p), p, p.Gamma);
  const Field2D fld(kv, modes, p.m, p.Gamma);
  const double Lx = 1.0 / std::abs(kv.k2);
  std::uniform_real_distribution<double> fx(0.0, 2.0 * Lx);
  std::uniform_real_distribution<double> fy(-0.75 * p.guide_separation,
                                            0.75 * p.guide_separation);
  auto psi2 = [&](double x, double y) { return fld.value(std::abs(x), y); };
  worst = 0.0;
  const double vscale = std::abs(kv.k2) / p.m;
  for (int i = 0; i < 100; ++i) {
    const double x = fx(rng), y = fy(rng);
    const auto v = fld.velocity(x, y);
    if (v.singular) continue;
    const auto vfd = oracle::fd_phase_gradient(psi2, x, y, 1e-4 * Lx, p.m);
    worst = std::max(worst, std::hypot(vfd[0] - v.vx, vfd[1] - v.vy) /
                                std::max(vscale, std::hypot(v.vx, v.vy)));
  }
  check(out, "velocity.field2d_fd_vs_closed", worst, 1e-6);

  // Gamma = 0 evanescent: velocity vanishes identically.
  const Wavevectors kv0 = wavevectors(energy_from_delta(Delta, p), p, 0.0);
  const Field2D fld0(kv0, modes, p.m, 0.0);
  worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto v = fld0.velocity(fx(rng), fy(rng));
    if (!v.singular) worst = std::max(worst, std::hypot(v.vx, v.vy));
  }
  check(out, "velocity.lossless_evanescent_zero", worst / vscale, 1e-12);
}

void suite_continuity(std::vector<CheckResult>& out, const CavityParams& p) {
  const Model model = build_model(p, 4001);
  const Field2D fld = make_field(model, -2.0 * p.J0, true);
  const double L = 1.0 / fld.wavevectors().k2.imag();
  GridSpec2D grid;
  grid.x0 = 0.0;
  grid.x1 = 2.0 * L;
  grid.nx = 401;  // h = L/200
  grid.y0 = -0.75 * p.guide_separation;
  grid.y1 = 0.75 * p.guide_separation;
  grid.ny = 401;
  const ContinuityReport rep = continuity_residual(fld, grid);
  check(out, "continuity.normalized_max_residual", rep.max_normalized(), 1e-2);
}

void suite_tdse(std::vector<CheckResult>& out, const CavityParams& /*p*/) {
  // Free Gaussian packet in model units: analytic drift and spreading.
  const double m = 1.0, k0 = 1.0, s0 = 5.0;
  auto st = oracle::make_grid_state(-150.0, 250.0, 4001, m);
  for (std::size_t i = 0; i < st.x.size(); ++i) {
    const double x = st.x[i];
    st.psi[i] = std::exp(std::complex<double>(-x * x / (4.0 * s0 * s0), k0 * x));
  }
  const double dt = 0.05;
  const int steps = 1000;
  oracle::tdse_propagate(st, dt, steps);
  const double T = dt * steps;
  double nrm = 0.0, mean = 0.0, var = 0.0;
  for (std::size_t i = 0; i < st.x.size(); ++i) {
    const double w = std::norm(st.psi[i]) * st.h;
    nrm += w;
    mean += st.x[i] * w;
  }
  mean /= nrm;
  for (std::size_t i = 0; i < st.x.size(); ++i)
    var += std::pow(st.x[i] - mean, 2) * std::norm(st.psi[i]) * st.h / nrm;
  const double mean_exact = k0 / m * T;
  const double width_exact = s0 * std::sqrt(1.0 + std::pow(T / (2.0 * m * s0 * s0), 2));
  check(out, "tdse.free_packet_drift", std::abs(mean / mean_exact - 1.0), 5e-3);
  check(out, "tdse.free_packet_spread",
        std::abs(std::sqrt(var) / width_exact - 1.0), 5e-3);

  // Uniform -i Gamma/2: exact exponential norm decay.
  const double Gamma = 0.02;
  auto st2 = oracle::make_grid_state(-60.0, 60.0, 2001, m);
  for (std::size_t i = 0; i < st2.x.size(); ++i) {
    const double x = st2.x[i];
    st2.psi[i] = std::exp(-x * x / 100.0);
    st2.V[i] = std::complex<double>(0.0, -0.5 * Gamma);
  }
  const double n0 = st2.norm();
  oracle::tdse_propagate(st2, 0.05, 400);
  const double expected = n0 * std::exp(-Gamma * st2.t);
  check(out, "tdse.uniform_decay", std::abs(st2.norm() / expected - 1.0), 1e-6);
}

}  // namespace

std::vector<CheckResult> run_validation(const std::string& suite,
                                        const CavityParams& p) {
  std::vector<CheckResult> out;
  const bool all = suite == "all";
  if (all || suite == "eigen") suite_eigen(out, p);
  if (all || suite == "velocity") suite_velocity(out, p);
  if (all || suite == "continuity") suite_continuity(out, p);
  if (all || suite == "tdse") suite_tdse(out, p);
  if (out.empty()) throw std::invalid_argument("unknown validation suite: " + suite);
  return out;
}

bool all_passed(const std::vector<CheckResult>& checks) {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

}  // namespace bohmflux
