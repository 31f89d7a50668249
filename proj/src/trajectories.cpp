#include "bohmflux/trajectories.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace bohmflux {

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::LeftDomain: return "left-domain";
    case Termination::WeightFloor: return "weight-floor";
    case Termination::MaxTime: return "max-time";
    case Termination::Singular: return "singular";
  }
  return "?";
}

namespace {

struct StepResult {
  double x, y;
  bool singular = false;
};

StepResult rk4_step(const Field2D& fld, double x, double y, double dt) {
  auto eval = [&](double xx, double yy, double* vx, double* vy) {
    if (xx < 0) xx = 0;  // guard; domain exit is checked by the caller
    const auto v = fld.velocity(xx, yy);
    *vx = v.vx;
    *vy = v.vy;
    return !v.singular;
  };
  double k1x, k1y, k2x, k2y, k3x, k3y, k4x, k4y;
  StepResult r{x, y};
  if (!eval(x, y, &k1x, &k1y) ||
      !eval(x + 0.5 * dt * k1x, y + 0.5 * dt * k1y, &k2x, &k2y) ||
      !eval(x + 0.5 * dt * k2x, y + 0.5 * dt * k2y, &k3x, &k3y) ||
      !eval(x + dt * k3x, y + dt * k3y, &k4x, &k4y)) {
    r.singular = true;
    return r;
  }
  r.x = x + dt / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x);
  r.y = y + dt / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
  return r;
}

}  // namespace

Trajectory integrate(const Field2D& fld, double x0, double y0,
                     const TrajConfig& cfg) {
  if (cfg.dt <= 0 || cfg.t_max <= 0)
    throw std::invalid_argument("integrate: dt and t_max must be > 0");
  const auto v0 = fld.velocity(x0, y0);
  if (v0.singular) throw std::invalid_argument("integrate: singular seed");
  const double speed0 = std::hypot(v0.vx, v0.vy);
  if (speed0 * cfg.dt > 0.1 * fld.characteristic_length())
    throw std::invalid_argument(
        "integrate: step too large (velocity*dt > L/10); reduce dt");

  Trajectory traj;
  traj.x0 = x0;
  traj.y0 = y0;
  const double gamma = fld.gamma();
  double x = x0, y = y0, t = 0.0;
  int step = 0;
  auto record = [&]() {
    traj.t.push_back(t);
    traj.x.push_back(x);
    traj.y.push_back(y);
    traj.w.push_back(std::exp(-gamma * t));
  };
  record();
  while (true) {
    if (t >= cfg.t_max) { traj.reason = Termination::MaxTime; break; }
    const StepResult r = rk4_step(fld, x, y, cfg.dt);
    if (r.singular) { traj.reason = Termination::Singular; break; }
    x = r.x;
    y = r.y;
    t += cfg.dt;
    ++step;
    if (x < 0 || y < fld.modes().y_min || y > fld.modes().y_max) {
      traj.reason = Termination::LeftDomain;
      record();
      break;
    }
    if (step % cfg.record_stride == 0) record();
    if (std::exp(-gamma * t) < cfg.weight_floor) {
      traj.reason = Termination::WeightFloor;
      if (step % cfg.record_stride != 0) record();
      break;
    }
  }
  return traj;
}

std::vector<double> sample_seeds(const Field2D& fld, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_seeds: n >= 1");
  const auto& mp = fld.modes();
  const int grid_n = 8192;
  const double h = (mp.y_max - mp.y_min) / (grid_n - 1);
  std::vector<double> cdf(grid_n, 0.0), ys(grid_n);
  double prev = 0.0;
  for (int i = 0; i < grid_n; ++i) {
    ys[i] = mp.y_min + i * h;
    const double f = std::pow(mp.phi_m(ys[i]), 2);
    if (i > 0) cdf[i] = cdf[i - 1] + 0.5 * (prev + f) * h;
    prev = f;
  }
  const double total = cdf.back();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    const double u = uni(rng) * total;
    auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    const int j = std::max<int>(1, int(it - cdf.begin()));
    const double frac = (u - cdf[j - 1]) / std::max(cdf[j] - cdf[j - 1], 1e-300);
    out[i] = ys[j - 1] + frac * h;
  }
  return out;
}

namespace {

TrajectorySet run_ensemble(const Field2D& fld, int n, const TrajConfig& cfg,
                           std::uint64_t seed, bool parallel) {
  TrajectorySet set;
  set.rng_seed = seed;
  set.dt = cfg.dt;
  const std::vector<double> seeds = sample_seeds(fld, n, seed);
  set.trajectories.resize(n);

#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int i = 0; i < n; ++i)
    set.trajectories[i] = integrate(fld, 0.0, seeds[i], cfg);

  int aux = 0;
  double depth = 0.0;
  for (const auto& traj : set.trajectories) {
    bool reached = false;
    double xmax = 0.0;
    for (std::size_t k = 0; k < traj.x.size(); ++k) {
      xmax = std::max(xmax, traj.x[k]);
      if (traj.y[k] > 0) reached = true;
    }
    if (reached) ++aux;
    depth += xmax;
  }
  set.stats.fraction_aux = double(aux) / n;
  set.stats.mean_turnaround_depth = depth / n;
  return set;
}

}  // namespace

TrajectorySet ensemble(const Field2D& fld, int n, const TrajConfig& cfg,
                       std::uint64_t seed) {
  return run_ensemble(fld, n, cfg, seed, true);
}

TrajectorySet ensemble_serial(const Field2D& fld, int n, const TrajConfig& cfg,
                              std::uint64_t seed) {
  return run_ensemble(fld, n, cfg, seed, false);
}

PlaneCrossing trace_to_plane(const Field2D& fld, double y0, double X,
                             const TrajConfig& cfg) {
  PlaneCrossing out;
  const auto v0 = fld.velocity(0.0, y0);
  if (v0.singular) throw std::invalid_argument("trace_to_plane: singular seed");
  double x = 0.0, y = y0, t = 0.0;
  while (t < cfg.t_max) {
    const StepResult r = rk4_step(fld, x, y, cfg.dt);
    if (r.singular) return out;
    if (r.x >= X) {
      const double f = (X - x) / (r.x - x);
      out.crossed = true;
      out.y = y + f * (r.y - y);
      out.t = t + f * cfg.dt;
      return out;
    }
    x = r.x;
    y = r.y;
    t += cfg.dt;
    if (x < 0 || y < fld.modes().y_min || y > fld.modes().y_max) return out;
  }
  return out;
}

}  // namespace bohmflux
