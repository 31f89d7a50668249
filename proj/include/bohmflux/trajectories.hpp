#pragma once

#include <cstdint>
#include <vector>

#include "bohmflux/stationary2d.hpp"

namespace bohmflux {

struct TrajConfig {
  double dt = 0.0;
  double t_max = 0.0;
  double weight_floor = 1e-4;
  int record_stride = 1;  // every n-th step is stored
};

enum class Termination { LeftDomain, WeightFloor, MaxTime, Singular };
const char* termination_name(Termination t);

struct Trajectory {
  double x0 = 0.0, y0 = 0.0;
  std::vector<double> t, x, y, w;  // w = exp(-Gamma t), survival weight
  Termination reason = Termination::MaxTime;
};

struct EnsembleStats {
  double fraction_aux = 0.0;          // trajectories that ever reach y > 0
  double mean_turnaround_depth = 0.0; // mean of max x over trajectories
};

struct TrajectorySet {
  std::vector<Trajectory> trajectories;
  EnsembleStats stats;
  std::uint64_t rng_seed = 0;
  double dt = 0.0;
};

// Fixed-step RK4 on (dx/dt, dy/dt) = (v_x, v_y). Halts on domain exit
// (x < 0 or y outside the mode window), weight floor, t_max, or a singular
// (nodal) sample. Throws on a singular seed or a step size exceeding a tenth
// of the field's characteristic length at the seed speed.
Trajectory integrate(const Field2D& fld, double x0, double y0,
                     const TrajConfig& cfg);

// Born-rule seeds on the injection line x = 0: y0 ~ |Phi_m(y)|^2 by
// inverse-CDF sampling; deterministic for a fixed rng seed.
std::vector<double> sample_seeds(const Field2D& fld, int n, std::uint64_t seed);

// n independent integrations (OpenMP-parallel; results are merged by seed
// index so the output is identical to the serial reference).
TrajectorySet ensemble(const Field2D& fld, int n, const TrajConfig& cfg,
                       std::uint64_t seed);
// Serial reference implementation, kept for testing and benchmarking.
TrajectorySet ensemble_serial(const Field2D& fld, int n, const TrajConfig& cfg,
                              std::uint64_t seed);

// Integrates without storing samples until the trajectory crosses x = X;
// returns the interpolated crossing ordinate and reports success.
struct PlaneCrossing {
  bool crossed = false;
  double y = 0.0;
  double t = 0.0;
};
PlaneCrossing trace_to_plane(const Field2D& fld, double y0, double X,
                             const TrajConfig& cfg);

}  // namespace bohmflux
