#include "bohmflux/opspeed.hpp"

#include <cmath>
#include <stdexcept>

namespace bohmflux {

const char* fit_method_name(FitMethod m) {
  switch (m) {
    case FitMethod::QuadraticSmallX: return "quadratic-small-x";
    case FitMethod::ArcsinLinearized: return "arcsin-linearized";
  }
  return "?";
}

double population_ratio(const Wavevectors& kv, double x) {
  if (x < 0) throw std::invalid_argument("population_ratio: x >= 0 required");
  const double ca = std::norm(std::sin(kv.k1 * x));
  const double cm = std::norm(std::cos(kv.k1 * x));
  if (!(ca + cm > 0) || !std::isfinite(ca + cm))
    throw std::runtime_error("population_ratio: coefficients below floor");
  return ca / (ca + cm);
}

double population_ratio(const Field2D& fld, double x) {
  return population_ratio(fld.wavevectors(), x);
}

SpeedFit fit_speed(std::span<const std::pair<double, double>> samples, double J0,
                   FitMethod method, double noise_tol) {
  const double window = method == FitMethod::QuadraticSmallX ? 0.05 : 0.95;

  double sxx = 0.0, sxy = 0.0, prev = -1.0;
  SpeedFit fit;
  fit.method = method;
  std::vector<std::pair<double, double>> transformed;
  transformed.reserve(samples.size());
  for (const auto& [x, rho] : samples) {
    if (rho < 0 || rho > 1) throw std::invalid_argument("fit_speed: rho outside [0,1]");
    if (rho >= window) continue;  // outside the method's validity window
    const double r = std::sqrt(rho);
    if (r < prev - noise_tol)
      throw std::invalid_argument("fit_speed: non-monotone sqrt(rho) beyond noise tolerance");
    prev = std::max(prev, r);
    const double g = method == FitMethod::QuadraticSmallX ? r : std::asin(r);
    if (transformed.empty()) fit.x_min = x;
    fit.x_max = x;
    transformed.emplace_back(x, g);
    sxx += x * x;
    sxy += x * g;
  }
  if (transformed.size() < 8)
    throw std::invalid_argument("fit_speed: >= 8 samples inside the fit window");
  // Least-squares line through the origin; slope = J0 / v.
  const double slope = sxy / sxx;
  if (slope <= 0) throw std::runtime_error("fit_speed: non-positive slope");
  fit.v = J0 / slope;
  double ss = 0.0;
  for (const auto& [x, g] : transformed) ss += std::pow(g - slope * x, 2);
  fit.residual_rms = std::sqrt(ss / transformed.size());
  return fit;
}

double closed_form_speed(double Delta, const CavityParams& p) {
  if (Delta >= -p.J0)
    throw std::invalid_argument("closed_form_speed: Delta < -J0 required");
  const double km = std::sqrt(2.0 * p.m * (-Delta + p.J0));
  const double kp = std::sqrt(2.0 * p.m * (-Delta - p.J0));
  return 2.0 * p.J0 / (km - kp);
}

std::vector<SpeedPoint> speed_curve(std::span<const double> deltas,
                                    const CavityParams& p) {
  for (double d : deltas)
    if (d >= -p.J0)
      throw std::invalid_argument("speed_curve: all deltas must be evanescent");

  std::vector<SpeedPoint> out(deltas.size());
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    const double Delta = deltas[i];
    SpeedPoint pt;
    pt.delta = Delta;
    pt.v_closed = closed_form_speed(Delta, p);
    pt.v_bohm_leak =
        p.Gamma > 0 ? leakage_velocity_estimate(Delta, p) : 0.0;

    // Operational fit on lossless population samples in the small-x window
    // kappa1 x <= 0.1.
    const Wavevectors kv = wavevectors(energy_from_delta(Delta, p), p, 0.0);
    const double kappa1 = kv.kappa1();
    std::vector<std::pair<double, double>> samples;
    const int ns = 32;
    for (int j = 1; j <= ns; ++j) {
      const double x = 0.1 * j / ns / kappa1;
      samples.emplace_back(x, population_ratio(kv, x));
    }
    pt.v_fit = fit_speed(samples, p.J0, FitMethod::QuadraticSmallX).v;
    out[i] = pt;
  }
  return out;
}

}  // namespace bohmflux
