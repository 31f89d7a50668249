#include "bohmflux/stationary2d.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "bohmflux/oracle.hpp"

namespace bohmflux {

Wavevectors wavevectors(double E, const CavityParams& p, double gamma) {
  if (gamma < 0) throw std::invalid_argument("wavevectors: gamma >= 0 required");
  const double Delta = kinetic_offset(E, p);
  Wavevectors kv;
  // Delta comes out of an E round trip, so an exact branch point can pick up
  // a few ulp of the O(1) energy scale; snap those to k = 0 exactly.
  const double arg_floor = 16.0 * std::numeric_limits<double>::epsilon() * 2.0 *
                           p.m * (std::abs(E) + p.m + std::abs(p.V0) + p.J0);
  auto branch = [&](double delta_part) {
    // 2m(E - E_pm + i gamma/2 - m); the principal sqrt already has Im >= 0
    // for arguments in the closed upper half-plane.
    std::complex<double> arg(2.0 * p.m * delta_part, p.m * gamma);
    if (std::abs(arg) <= arg_floor) return std::complex<double>(0.0, 0.0);
    std::complex<double> k = std::sqrt(arg);
    if (k.imag() < 0.0) k = -k;
    return k;
  };
  // k_+ pairs with the symmetric (lower) transverse level, k_- with the
  // antisymmetric one, so that in the evanescent regime kappa_- > kappa_+ and
  // kappa_1 = (kappa_- - kappa_+)/2 > 0.
  kv.k_plus = branch(Delta + p.J0);
  kv.k_minus = branch(Delta - p.J0);
  kv.degenerate = (std::abs(kv.k_plus) == 0.0 || std::abs(kv.k_minus) == 0.0);
  kv.k1 = 0.5 * (kv.k_minus - kv.k_plus);
  kv.k2 = 0.5 * (kv.k_minus + kv.k_plus);
  return kv;
}

namespace {

// Cubic Hermite interpolation of grid samples, with node derivatives from
// 4th-order central differences so the evaluator is C^1 and its analytic
// derivative is what velocity formulas consume.
struct CubicInterp {
  double y0, h;
  std::vector<double> f, d;

  CubicInterp(const std::vector<double>& y, double spacing,
              const std::vector<double>& vals)
      : y0(y.front()), h(spacing), f(vals), d(vals.size(), 0.0) {
    const std::size_t n = f.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (i >= 2 && i + 2 < n)
        d[i] = (8.0 * (f[i + 1] - f[i - 1]) - (f[i + 2] - f[i - 2])) / (12.0 * h);
      else if (i >= 1 && i + 1 < n)
        d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
      else if (i == 0)
        d[i] = (f[1] - f[0]) / h;
      else
        d[i] = (f[n - 1] - f[n - 2]) / h;
    }
  }

  double value(double y) const {
    const auto [i, t] = locate(y);
    if (i < 0) return 0.0;
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    const double h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t);
    const double h11 = t * t * (t - 1);
    return h00 * f[i] + h10 * h * d[i] + h01 * f[i + 1] + h11 * h * d[i + 1];
  }

  double deriv(double y) const {
    const auto [i, t] = locate(y);
    if (i < 0) return 0.0;
    const double g00 = 6 * t * (t - 1);
    const double g10 = (1 - t) * (1 - 3 * t);
    const double g01 = -g00;
    const double g11 = t * (3 * t - 2);
    return (g00 * f[i] + g01 * f[i + 1]) / h + g10 * d[i] + g11 * d[i + 1];
  }

 private:
  std::pair<int, double> locate(double y) const {
    const double s = (y - y0) / h;
    if (s < 0.0 || s > double(f.size() - 1)) return {-1, 0.0};
    int i = std::min(int(s), int(f.size()) - 2);
    return {i, s - i};
  }
};

}  // namespace

ModePair grid_modes(const ModeBasis& basis) {
  if (basis.Phi_m.empty() || basis.Phi_a.empty())
    throw std::invalid_argument("grid_modes: basis not hybridized");
  auto im = std::make_shared<CubicInterp>(basis.y, basis.h, basis.Phi_m);
  auto ia = std::make_shared<CubicInterp>(basis.y, basis.h, basis.Phi_a);
  ModePair mp;
  mp.phi_m = [im](double y) { return im->value(y); };
  mp.dphi_m = [im](double y) { return im->deriv(y); };
  mp.phi_a = [ia](double y) { return ia->value(y); };
  mp.dphi_a = [ia](double y) { return ia->deriv(y); };
  mp.y_min = basis.y.front();
  mp.y_max = basis.y.back();
  mp.y_main = basis.y_main;
  mp.y_aux = basis.y_aux;
  for (double v : basis.Phi_m) mp.phi_peak = std::max(mp.phi_peak, std::abs(v));
  return mp;
}

ModePair gaussian_modes(double separation, double width) {
  const double c = 0.5 * separation;
  const double norm = std::pow(2.0 * M_PI * width * width, -0.25);
  auto mode = [=](double center) {
    return [=](double y) {
      const double u = y - center;
      return norm * std::exp(-u * u / (4.0 * width * width));
    };
  };
  auto dmode = [=](double center) {
    return [=](double y) {
      const double u = y - center;
      return -u / (2.0 * width * width) * norm *
             std::exp(-u * u / (4.0 * width * width));
    };
  };
  ModePair mp;
  mp.phi_m = mode(-c);
  mp.dphi_m = dmode(-c);
  mp.phi_a = mode(c);
  mp.dphi_a = dmode(c);
  mp.y_min = -(c + 8.0 * width);
  mp.y_max = c + 8.0 * width;
  mp.y_main = -c;
  mp.y_aux = c;
  mp.phi_peak = norm;
  return mp;
}

Field2D::Field2D(const Wavevectors& kv, ModePair modes, double m, double gamma)
    : kv_(kv), modes_(std::move(modes)), m_(m), gamma_(gamma) {
  floor_ = 1e-30 * modes_.phi_peak * modes_.phi_peak;
}

std::complex<double> Field2D::coeff_main(double x) const {
  return std::cos(kv_.k1 * x);
}

std::complex<double> Field2D::coeff_aux(double x) const {
  return std::complex<double>(0.0, -1.0) * std::sin(kv_.k1 * x);
}

std::complex<double> Field2D::value(double x, double y) const {
  if (x < 0) throw std::invalid_argument("Field2D: x >= 0 required");
  const std::complex<double> i(0.0, 1.0);
  return std::exp(i * kv_.k2 * x) *
         (coeff_main(x) * modes_.phi_m(y) + coeff_aux(x) * modes_.phi_a(y));
}

Field2D::Velocity Field2D::velocity(double x, double y) const {
  if (x < 0) throw std::invalid_argument("Field2D: x >= 0 required");
  const std::complex<double> i(0.0, 1.0);
  const double pm = modes_.phi_m(y);
  const double pa = modes_.phi_a(y);
  const std::complex<double> c = std::cos(kv_.k1 * x);
  const std::complex<double> s = std::sin(kv_.k1 * x);
  const std::complex<double> den = c * pm - i * s * pa;

  Velocity v;
  const double amp2 = std::norm(den) * std::exp(-2.0 * kv_.k2.imag() * x);
  if (amp2 < floor_) {
    v.singular = true;
    return v;
  }
  const std::complex<double> num_x = kv_.k1 * (-s * pm - i * c * pa);
  v.vx = kv_.k2.real() / m_ + (num_x / den).imag() / m_;
  const std::complex<double> num_y = c * modes_.dphi_m(y) - i * s * modes_.dphi_a(y);
  v.vy = (num_y / den).imag() / m_;
  return v;
}

double Field2D::characteristic_length() const {
  const double k = std::max(std::abs(kv_.k1), std::abs(kv_.k2));
  return k > 0 ? 1.0 / k : std::numeric_limits<double>::infinity();
}

double leakage_velocity_estimate(double Delta, const CavityParams& p) {
  if (Delta >= -p.J0)
    throw std::invalid_argument("leakage_velocity_estimate: Delta < -J0 required");
  if (p.Gamma / p.m >= 1e-2)
    throw std::invalid_argument("leakage_velocity_estimate: Gamma/m < 1e-2 required");
  const double v_delta = std::sqrt(-2.0 * Delta / p.m);
  return (p.Gamma / (2.0 * p.m)) / v_delta;
}

double ContinuityReport::max_normalized() const {
  return normalization > 0 ? max_residual / normalization : max_residual;
}

double ContinuityReport::l2_normalized() const {
  return normalization > 0 ? l2_residual / normalization : l2_residual;
}

ContinuityReport continuity_residual(const Field2D& fld, const GridSpec2D& grid) {
  if (grid.x0 < 0) throw std::invalid_argument("continuity_residual: x >= 0 required");
  auto psi = [&](double x, double y) { return fld.value(x, y); };
  auto vel = [&](double x, double y) {
    const auto v = fld.velocity(x, y);
    return std::array<double, 2>{v.vx, v.vy};
  };
  return oracle::continuity_grid_check(psi, vel, fld.gamma(), grid);
}

}  // namespace bohmflux
