#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "bohmflux/model.hpp"
#include "bohmflux/trajectories.hpp"

using namespace bohmflux;

namespace {

CavityParams default_params() {
  CavityParams p;
  p.V0 = 8.2e-4;
  p.J0 = 2.5e-5;
  p.Gamma = 2.0e-6;
  p.guide_separation = 173.0;
  p.well_width = 43.0;
  return p;
}

Field2D make_test_field(double delta_over_j0, double gamma) {
  const CavityParams p = default_params();
  const ModePair modes = gaussian_modes(p.guide_separation, 20.0);
  const double E = energy_from_delta(delta_over_j0 * p.J0, p);
  return Field2D(wavevectors(E, p, gamma), modes, p.m, gamma);
}

// Calibrated numeric model: its field is an exact stationary solution, so
// probability actually beats between the guides (the analytic Gaussian modes
// are not exact eigenmodes and give no transverse transfer).
const Model& test_model() {
  static const Model model = build_model(default_params(), 2001);
  return model;
}

CavityParams effective_params(const Model& model) {
  CavityParams p = model.params;
  p.J0 = model.basis.J0_eff();
  p.V0 = model.basis.E0_eff() + p.J0;
  return p;
}

}  // namespace

TEST_CASE("step-size and seed preconditions") {
  const Field2D fld = make_test_field(2.0, 0.0);  // propagative, v ~ 1e-2
  TrajConfig cfg;
  cfg.dt = 1e6;  // v * dt far above L/10
  cfg.t_max = 1e7;
  CHECK_THROWS_AS(integrate(fld, 0.0, fld.modes().y_main, cfg),
                  std::invalid_argument);
  cfg.dt = -1.0;
  CHECK_THROWS_AS(integrate(fld, 0.0, fld.modes().y_main, cfg),
                  std::invalid_argument);

  const Field2D leaky = make_test_field(-2.0, 2e-6);
  TrajConfig ok{1e3, 1e5};
  // Seed deep in the nodal tail where |Psi|^2 underflows the floor.
  CHECK_THROWS_AS(integrate(leaky, 0.0, leaky.modes().y_max - 1.0, ok),
                  std::invalid_argument);
}

TEST_CASE("lossless evanescent trajectories are frozen until t_max") {
  const Field2D fld = make_test_field(-2.0, 0.0);
  TrajConfig cfg{50.0, 5000.0};
  const Trajectory traj = integrate(fld, 0.0, fld.modes().y_main, cfg);
  CHECK(traj.reason == Termination::MaxTime);
  for (std::size_t i = 0; i < traj.x.size(); ++i) {
    CHECK(traj.x[i] == 0.0);
    CHECK(traj.y[i] == fld.modes().y_main);
    CHECK(traj.w[i] == 1.0);
  }
}

TEST_CASE("survival weight follows exp(-Gamma t) and trips the floor") {
  const double gamma = 2e-6;
  const Field2D fld = make_test_field(-2.0, gamma);
  TrajConfig cfg{1e3, 1e8};
  cfg.weight_floor = 0.9;
  const Trajectory traj = integrate(fld, 0.0, fld.modes().y_main, cfg);
  CHECK(traj.reason == Termination::WeightFloor);
  for (std::size_t i = 0; i < traj.t.size(); ++i)
    CHECK(traj.w[i] == doctest::Approx(std::exp(-gamma * traj.t[i])).epsilon(1e-14));
  CHECK(traj.w.back() < 0.9);
  CHECK(traj.w.back() > 0.9 * std::exp(-gamma * cfg.dt));
}

TEST_CASE("domain exit through a truncated transverse window") {
  const Model& model = test_model();
  const CavityParams p = effective_params(model);
  ModePair modes = model.modes;
  modes.y_max = modes.y_main + 30.0;  // wall just above the main guide
  const double E = energy_from_delta(2.0 * p.J0, p);
  const Field2D fld(wavevectors(E, p, 0.0), modes, p.m, 0.0);
  TrajConfig cfg{200.0, 1e7};
  const Trajectory traj = integrate(fld, 0.0, modes.y_main, cfg);
  CHECK(traj.reason == Termination::LeftDomain);
  CHECK(traj.y.back() > modes.y_max);
}

TEST_CASE("RK4 global error decays at fourth order") {
  // Propagative model field: the beating path has genuine transverse
  // curvature, so the discretization error dominates rounding noise.
  const Field2D fld = make_field(test_model(), 2.0 * test_model().params.J0, false);
  const double y0 = fld.modes().y_main;
  auto final_y = [&](double dt) {
    TrajConfig cfg{dt, 4.0e5};
    const Trajectory traj = integrate(fld, 0.0, y0, cfg);
    REQUIRE(traj.reason == Termination::MaxTime);
    return traj.y.back();
  };
  // Error against a fine-step reference; below dt ~ 200 the cubic mode
  // interpolation (a C^1 field) caps further decay, so stay above that.
  const double ref = final_y(50.0);
  const double e1 = std::abs(final_y(800.0) - ref);
  const double e2 = std::abs(final_y(400.0) - ref);
  const double order = std::log2(e1 / e2);
  CHECK(order > 3.0);
  CHECK(order < 5.2);
}

TEST_CASE("record_stride subsamples without changing the path") {
  const Field2D fld = make_test_field(-2.0, 2e-6);
  TrajConfig dense{500.0, 1e5, 1e-4, 1};
  TrajConfig sparse{500.0, 1e5, 1e-4, 10};
  const Trajectory a = integrate(fld, 0.0, fld.modes().y_main, dense);
  const Trajectory b = integrate(fld, 0.0, fld.modes().y_main, sparse);
  REQUIRE(b.t.size() >= 2);
  CHECK(a.t.size() > 5 * b.t.size());
  for (std::size_t i = 0; i < b.t.size(); ++i) {
    const std::size_t j = i * 10;
    REQUIRE(j < a.t.size());
    CHECK(b.t[i] == a.t[j]);
    CHECK(b.x[i] == a.x[j]);
    CHECK(b.y[i] == a.y[j]);
  }
}

TEST_CASE("seed sampling is deterministic and Born-distributed") {
  const Field2D fld = make_test_field(-2.0, 2e-6);
  const auto s1 = sample_seeds(fld, 5000, 42);
  const auto s2 = sample_seeds(fld, 5000, 42);
  const auto s3 = sample_seeds(fld, 5000, 43);
  CHECK(s1 == s2);
  CHECK(s1 != s3);

  // KS distance against the trapezoid CDF of phi_m^2.
  const auto& mp = fld.modes();
  const int gn = 20000;
  const double h = (mp.y_max - mp.y_min) / (gn - 1);
  std::vector<double> ys(gn), cdf(gn, 0.0);
  for (int i = 0; i < gn; ++i) {
    ys[i] = mp.y_min + i * h;
    if (i)
      cdf[i] = cdf[i - 1] + 0.5 * h * (std::pow(mp.phi_m(ys[i - 1]), 2) +
                                       std::pow(mp.phi_m(ys[i]), 2));
  }
  for (double& c : cdf) c /= cdf.back();

  std::vector<double> sorted = sample_seeds(fld, 20000, 7);
  std::sort(sorted.begin(), sorted.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const int j = std::clamp<int>(int((sorted[i] - mp.y_min) / h), 0, gn - 1);
    ks = std::max(ks, std::abs(cdf[j] - double(i + 1) / sorted.size()));
  }
  CHECK(ks < 0.02);
}

TEST_CASE("parallel ensemble is bitwise identical to the serial reference") {
  const Field2D fld = make_test_field(-2.0, 2e-6);
  TrajConfig cfg{2e3, 2e5, 1e-4, 4};
  const TrajectorySet par = ensemble(fld, 128, cfg, 2024);
  const TrajectorySet ser = ensemble_serial(fld, 128, cfg, 2024);
  REQUIRE(par.trajectories.size() == ser.trajectories.size());
  for (std::size_t i = 0; i < par.trajectories.size(); ++i) {
    const auto& a = par.trajectories[i];
    const auto& b = ser.trajectories[i];
    CHECK(a.y0 == b.y0);
    CHECK(a.reason == b.reason);
    REQUIRE(a.x.size() == b.x.size());
    for (std::size_t k = 0; k < a.x.size(); ++k) {
      CHECK(a.x[k] == b.x[k]);
      CHECK(a.y[k] == b.y[k]);
    }
  }
  CHECK(par.stats.fraction_aux == ser.stats.fraction_aux);
  CHECK(par.stats.mean_turnaround_depth == ser.stats.mean_turnaround_depth);
}

TEST_CASE("ensemble stats agree with a direct recount") {
  // Propagative model field: y actually moves between the guides.
  const Field2D fld = make_field(test_model(), 2.0 * test_model().params.J0, false);
  TrajConfig cfg{100.0, 2e5, 1e-4, 8};
  const TrajectorySet set = ensemble(fld, 64, cfg, 5);
  int aux = 0;
  double depth = 0.0;
  for (const auto& traj : set.trajectories) {
    bool reached = false;
    double xmax = 0.0;
    for (std::size_t k = 0; k < traj.x.size(); ++k) {
      xmax = std::max(xmax, traj.x[k]);
      reached = reached || traj.y[k] > 0;
    }
    aux += reached;
    depth += xmax;
  }
  CHECK(set.stats.fraction_aux == doctest::Approx(aux / 64.0));
  CHECK(set.stats.mean_turnaround_depth == doctest::Approx(depth / 64.0));
  CHECK(set.stats.fraction_aux > 0.5);  // beating carries most seeds across
}

TEST_CASE("trace_to_plane matches the recorded trajectory crossing") {
  const Field2D fld = make_test_field(-2.0, 2e-6);
  const double y0 = fld.modes().y_main;
  const double X = 20.0;
  TrajConfig cfg{500.0, 1e7};
  const PlaneCrossing pc = trace_to_plane(fld, y0, X, cfg);
  REQUIRE(pc.crossed);

  const Trajectory traj = integrate(fld, 0.0, y0, cfg);
  double t_ref = -1.0, y_ref = 0.0;
  for (std::size_t i = 1; i < traj.x.size(); ++i) {
    if (traj.x[i - 1] < X && traj.x[i] >= X) {
      const double f = (X - traj.x[i - 1]) / (traj.x[i] - traj.x[i - 1]);
      t_ref = traj.t[i - 1] + f * (traj.t[i] - traj.t[i - 1]);
      y_ref = traj.y[i - 1] + f * (traj.y[i] - traj.y[i - 1]);
      break;
    }
  }
  REQUIRE(t_ref > 0.0);
  CHECK(pc.t == doctest::Approx(t_ref).epsilon(1e-6));
  CHECK(pc.y == doctest::Approx(y_ref).epsilon(1e-6));

  // A plane past the turnaround of a bounded path reports no crossing.
  TrajConfig shallow{500.0, 2e4};
  CHECK(!trace_to_plane(fld, y0, 1e6, shallow).crossed);
}
