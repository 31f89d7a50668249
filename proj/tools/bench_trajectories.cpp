// Benchmark: OpenMP ensemble integration vs the serial reference.
#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bohmflux/model.hpp"
#include "bohmflux/params.hpp"
#include "bohmflux/trajectories.hpp"

namespace bf = bohmflux;

namespace {

double time_run(bf::TrajectorySet (*run)(const bf::Field2D&, int,
                                         const bf::TrajConfig&, std::uint64_t),
                const bf::Field2D& fld, int n, const bf::TrajConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto set = run(fld, n, cfg, 42);
  const auto t1 = std::chrono::steady_clock::now();
  std::printf("  fraction_aux = %.3f, mean depth = %.3f\n",
              set.stats.fraction_aux, set.stats.mean_turnaround_depth);
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main() {
  bf::CavityParams p;
  p.V0 = 1e-3 / 1.22;
  p.J0 = 2.5e-5;
  p.Gamma = 2e-6;
  p.sigma = 2e-8;
  p.E0 = p.m + p.V0 - 3.0 * p.J0;
  p.guide_separation = 173.0;
  p.well_width = 43.0;

  // Analytic modes keep the benchmark focused on the integrator.
  const bf::ModePair modes = bf::gaussian_modes(p.guide_separation, 15.0);
  const bf::Wavevectors kv =
      bf::wavevectors(bf::energy_from_delta(2.0 * p.J0, p), p, p.Gamma);
  const bf::Field2D fld(kv, modes, p.m, p.Gamma);

  bf::TrajConfig cfg;
  cfg.dt = 50.0;
  cfg.t_max = 4e5;
  cfg.weight_floor = 1e-4;
  cfg.record_stride = 100;  // sparse storage keeps the stats meaningful

  const int n = 2000;
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#endif
  std::printf("serial ensemble, n = %d\n", n);
  const double ts = time_run(&bf::ensemble_serial, fld, n, cfg);
  std::printf("parallel ensemble, n = %d\n", n);
  const double tp = time_run(&bf::ensemble, fld, n, cfg);
  std::printf("serial:   %.3f s\nparallel: %.3f s\nspeedup:  %.2fx\n", ts, tp,
              ts / tp);
  return 0;
}
