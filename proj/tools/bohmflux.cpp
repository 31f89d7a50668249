#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bohmflux/csv.hpp"
#include "bohmflux/model.hpp"
#include "bohmflux/opspeed.hpp"
#include "bohmflux/oracle.hpp"
#include "bohmflux/params.hpp"
#include "bohmflux/trajectories.hpp"
#include "bohmflux/validate.hpp"
#include "bohmflux/wavepacket.hpp"

namespace bf = bohmflux;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

json default_config() {
  return json{{"m_eV", 1.22},
              {"V0_eV", 1e-3},
              {"J0_eV", 3.05e-5},
              {"lifetime_ps", 270.0},
              {"pulse_ns", 26.0},
              {"delta_over_J0", -2.0},
              {"guide_separation_um", 20.0},
              {"well_width_um", 5.0},
              {"D0_um", 15.0},
              {"n_medium", 1.4},
              {"q", 1}};
}

struct RunContext {
  std::string subcommand;
  std::string config_path;
  json config;
  json overrides = json::object();
  std::uint64_t seed = 0;
  std::vector<std::string> outputs;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  bf::CavityParams params() const { return bf::load_config(config); }

  void write_manifest(const std::string& anchor_output) const {
    json m;
    m["tool_version"] = kVersion;
    m["subcommand"] = subcommand;
    m["config_path"] = config_path;
    m["config_hash"] = bf::fnv1a_hash(config.dump());
    m["overrides"] = overrides;
    m["rng_seed"] = seed;
    m["outputs"] = outputs;
    m["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    bf::write_text_atomic(anchor_output + ".manifest.json", m.dump(2) + "\n");
  }
};

json load_config_json(const std::string& path) {
  if (path.empty()) return default_config();
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config " + path);
  json base = default_config();
  json user = json::parse(in);
  base.merge_patch(user);
  return base;
}

double delta_from_config(const bf::CavityParams& p) {
  return bf::kinetic_offset(p.E0, p);
}

// Probes the velocity field near the injection line and picks dt so that
// v dt <= char_length / 100 for a high quantile of the sampled speeds. The
// quantile (not the max) keeps a single near-node spike from collapsing dt.
double auto_dt(const bf::Field2D& fld) {
  std::vector<double> speeds;
  const auto& mp = fld.modes();
  for (int i = 0; i <= 50; ++i) {
    const double y = mp.y_min + (mp.y_max - mp.y_min) * i / 50.0;
    for (double x : {0.0, 0.5 * fld.characteristic_length(),
                     fld.characteristic_length()}) {
      const auto v = fld.velocity(x, y);
      if (!v.singular) speeds.push_back(std::hypot(v.vx, v.vy));
    }
  }
  std::sort(speeds.begin(), speeds.end());
  if (speeds.empty() || speeds[speeds.size() * 9 / 10] == 0.0) return 1.0;
  return fld.characteristic_length() / (100.0 * speeds[speeds.size() * 9 / 10]);
}

double figure_x_extent(const bf::Field2D& fld) {
  const auto& kv = fld.wavevectors();
  if (std::abs(kv.k1.real()) > std::abs(kv.k1.imag()))
    return 2.0 * M_PI / std::abs(kv.k1.real());  // two inter-guide beats
  return 4.0 / kv.k2.imag();           // a few decay lengths
}

void emit_trajectories(const bf::TrajectorySet& set, const bf::CavityParams& p,
                       const std::string& path, RunContext& ctx) {
  bf::CsvWriter csv({"id", "t", "x_um", "y_um", "weight"});
  for (std::size_t id = 0; id < set.trajectories.size(); ++id) {
    const auto& tr = set.trajectories[id];
    for (std::size_t k = 0; k < tr.t.size(); ++k)
      csv.add_row({double(id), tr.t[k], p.length_to_um(tr.x[k]),
                   p.length_to_um(tr.y[k]), tr.w[k]});
  }
  csv.write(path);
  ctx.outputs.push_back(path);
}

void emit_background(const bf::Field2D& fld, const bf::CavityParams& p,
                     double x_max, const std::string& path, RunContext& ctx) {
  bf::CsvWriter csv({"x_um", "y_um", "psi2"});
  const auto& mp = fld.modes();
  const int nx = 200, ny = 200;
  for (int ix = 0; ix < nx; ++ix) {
    const double x = x_max * ix / (nx - 1);
    for (int iy = 0; iy < ny; ++iy) {
      const double y = mp.y_min + (mp.y_max - mp.y_min) * iy / (ny - 1);
      csv.add_row({p.length_to_um(x), p.length_to_um(y),
                   std::norm(fld.value(x, y))});
    }
  }
  csv.write(path);
  ctx.outputs.push_back(path);
}

bf::TrajConfig trajectory_config(const bf::Field2D& fld, double dt, double t_max,
                                 double weight_floor) {
  bf::TrajConfig cfg;
  const bool dt_auto = dt <= 0;
  cfg.dt = dt_auto ? auto_dt(fld) : dt;
  cfg.weight_floor = weight_floor;
  if (t_max > 0) {
    cfg.t_max = t_max;
  } else if (fld.gamma() > 0) {
    cfg.t_max = 1.2 * (-std::log(weight_floor)) / fld.gamma();
  } else {
    cfg.t_max = 2e5 * cfg.dt;
  }
  // Keep an automatically chosen step from exploding the run time.
  if (dt_auto && cfg.t_max / cfg.dt > 2e5) cfg.dt = cfg.t_max / 2e5;
  cfg.record_stride =
      std::max(1, int(cfg.t_max / cfg.dt / 2000));  // ~2000 samples per path
  return cfg;
}

int cmd_modes(RunContext& ctx, int grid_n, const std::string& out) {
  const bf::CavityParams p = ctx.params();
  const bf::Model model = bf::build_model(p, grid_n);
  bf::CsvWriter csv({"y_um", "V_eV", "phi_plus", "phi_minus", "phi_main", "phi_aux"});
  const auto& b = model.basis;
  for (std::size_t i = 0; i < b.y.size(); ++i)
    csv.add_row({p.length_to_um(b.y[i]), p.energy_to_eV(model.potential.V[i]),
                 b.Phi_plus[i], b.Phi_minus[i], b.Phi_m[i], b.Phi_a[i]});
  csv.write(out);
  ctx.outputs.push_back(out);

  json sidecar;
  sidecar["E_plus_eV"] = p.energy_to_eV(b.E_plus);
  sidecar["E_minus_eV"] = p.energy_to_eV(b.E_minus);
  sidecar["J0_eff_eV"] = p.energy_to_eV(b.J0_eff());
  sidecar["J0_target_eV"] = p.energy_to_eV(p.J0);
  sidecar["well_depth_eV"] = p.energy_to_eV(model.geometry.well_depth);
  const std::string side = out + ".json";
  bf::write_text_atomic(side, sidecar.dump(2) + "\n");
  ctx.outputs.push_back(side);
  ctx.write_manifest(out);
  return 0;
}

int cmd_packet(RunContext& ctx, double x0_um, double t0_over_tau,
               double t1_over_tau, int steps, const std::string& out) {
  const bf::CavityParams p = ctx.params();
  const bf::PacketSpec spec = bf::PacketSpec::make(p);
  const double tau = 1.0 / p.sigma;
  const auto traj = bf::packet_trajectory(p.length_from_um(x0_um),
                                          t0_over_tau * tau, t1_over_tau * tau,
                                          steps, spec);
  bf::CsvWriter csv({"t", "x_um", "v_km_s", "psi2"});
  for (std::size_t i = 0; i < traj.t.size(); ++i)
    csv.add_row({traj.t[i], p.length_to_um(traj.x[i]),
                 traj.v[i] * p.velocity_unit_km_s(),
                 std::norm(bf::packet_first_order(traj.x[i], traj.t[i], spec))});
  csv.write(out);
  ctx.outputs.push_back(out);
  ctx.write_manifest(out);
  return 0;
}

int cmd_field(RunContext& ctx, double delta_over_j0, int nx, int ny,
              const std::string& out) {
  const bf::CavityParams p = ctx.params();
  const bf::Model model = bf::build_model(p);
  const double Delta = std::isnan(delta_over_j0) ? delta_from_config(p)
                                                 : delta_over_j0 * p.J0;
  const bf::Field2D fld = bf::make_field(model, Delta, true);
  const double x_max = figure_x_extent(fld);
  const auto& mp = fld.modes();
  bf::CsvWriter csv({"x_um", "y_um", "re_psi", "im_psi", "psi2", "vx_km_s", "vy_km_s"});
  for (int ix = 0; ix < nx; ++ix) {
    const double x = x_max * ix / (nx - 1);
    for (int iy = 0; iy < ny; ++iy) {
      const double y = mp.y_min + (mp.y_max - mp.y_min) * iy / (ny - 1);
      const auto psi = fld.value(x, y);
      const auto v = fld.velocity(x, y);
      csv.add_row({p.length_to_um(x), p.length_to_um(y), psi.real(), psi.imag(),
                   std::norm(psi), v.vx * p.velocity_unit_km_s(),
                   v.vy * p.velocity_unit_km_s()});
    }
  }
  csv.write(out);
  ctx.outputs.push_back(out);
  ctx.write_manifest(out);
  return 0;
}

int cmd_trajectories(RunContext& ctx, double delta_over_j0, int n, double dt,
                     double t_max, const std::string& out,
                     const std::string& background) {
  const bf::CavityParams p = ctx.params();
  const bf::Model model = bf::build_model(p);
  const double Delta = std::isnan(delta_over_j0) ? delta_from_config(p)
                                                 : delta_over_j0 * p.J0;
  const bf::Field2D fld = bf::make_field(model, Delta, true);
  const bf::TrajConfig cfg = trajectory_config(fld, dt, t_max, 1e-4);
  const bf::TrajectorySet set = bf::ensemble(fld, n, cfg, ctx.seed);
  emit_trajectories(set, p, out, ctx);
  if (!background.empty())
    emit_background(fld, p, figure_x_extent(fld), background, ctx);
  ctx.write_manifest(out);
  return 0;
}

int cmd_speed_curve(RunContext& ctx, const std::string& range,
                    const std::string& out) {
  const bf::CavityParams p = ctx.params();
  double d0 = -1.5, d1 = -20.0, step = 0.5;
  if (!range.empty() &&
      std::sscanf(range.c_str(), "%lf:%lf:%lf", &d0, &d1, &step) != 3)
    throw std::invalid_argument("speed-curve: --deltas expects start:stop:step");
  std::vector<double> deltas;
  const double lo = std::min(d0, d1), hi = std::max(d0, d1);
  for (double d = hi; d >= lo - 1e-12; d -= std::abs(step))
    deltas.push_back(d * p.J0);
  const auto table = bf::speed_curve(deltas, p);
  const double vu = p.velocity_unit_km_s();
  bf::CsvWriter csv({"delta_over_J0", "v_closed", "v_fit", "v_bohm_leak",
                     "v_closed_km_s", "v_fit_km_s", "v_bohm_leak_km_s"});
  for (const auto& r : table)
    csv.add_row({r.delta / p.J0, r.v_closed, r.v_fit, r.v_bohm_leak,
                 r.v_closed * vu, r.v_fit * vu, r.v_bohm_leak * vu});
  csv.write(out);
  ctx.outputs.push_back(out);
  ctx.write_manifest(out);
  return 0;
}

int cmd_validate(RunContext& ctx, const std::string& suite,
                 const std::string& out) {
  const bf::CavityParams p = ctx.params();
  const auto checks = bf::run_validation(suite, p);
  json rep;
  rep["suite"] = suite;
  rep["checks"] = json::array();
  for (const auto& c : checks) {
    rep["checks"].push_back(
        {{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"tol", c.tol}});
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " value=" << c.value
              << " tol=" << c.tol << "\n";
  }
  const bool ok = bf::all_passed(checks);
  rep["passed"] = ok;
  if (!out.empty()) {
    bf::write_text_atomic(out, rep.dump(2) + "\n");
    ctx.outputs.push_back(out);
    ctx.write_manifest(out);
  } else {
    std::cout << rep.dump(2) << "\n";
  }
  return ok ? 0 : 1;
}

int cmd_figure1(RunContext& ctx, int n, const std::string& out_dir) {
  const bf::CavityParams p = ctx.params();
  std::filesystem::create_directories(out_dir);
  const bf::Model model = bf::build_model(p);
  struct Panel { const char* name; double delta; };
  for (const Panel panel : {Panel{"propagative", 2.0}, Panel{"evanescent", -2.0}}) {
    const bf::Field2D fld = bf::make_field(model, panel.delta * p.J0, true);
    const bf::TrajConfig cfg = trajectory_config(fld, 0.0, 0.0, 1e-4);
    const bf::TrajectorySet set = bf::ensemble(fld, n, cfg, ctx.seed);
    const std::string base = out_dir + "/" + panel.name;
    emit_trajectories(set, p, base + "_traj.csv", ctx);
    emit_background(fld, p, figure_x_extent(fld), base + "_density.csv", ctx);
  }
  ctx.write_manifest(out_dir + "/figure1");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
#ifdef _OPENMP
  if (const char* env = std::getenv("BOHMFLUX_THREADS"))
    if (const int t = std::atoi(env); t > 0) omp_set_num_threads(t);
#endif

  CLI::App app{"Coupled-waveguide Bohmian flux simulator"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string config_path, out, out2, suite = "all", deltas_range;
  std::uint64_t seed = 12345;
  double x0_um = 0.0, t0 = -1.0, t1 = 1.0, delta_over_j0 = NAN, dt = 0.0,
         t_max = 0.0;
  int n = 200, steps = 400, nx = 200, ny = 200, grid_n = 0;

  app.add_option("--config", config_path, "JSON config file (SI units)");
  app.add_option("--seed", seed, "RNG seed");

  auto* modes = app.add_subcommand("modes", "transverse eigenmodes");
  modes->add_option("--grid-n", grid_n, "y-grid points");
  modes->add_option("--out", out)->required();

  auto* packet = app.add_subcommand("packet", "1D evanescent packet trajectory");
  packet->add_option("--x0", x0_um, "start position [um]");
  packet->add_option("--t0", t0, "start time in units of 1/sigma");
  packet->add_option("--t1", t1, "end time in units of 1/sigma");
  packet->add_option("--steps", steps);
  packet->add_option("--out", out)->required();

  auto* field = app.add_subcommand("field", "stationary 2D field + velocities");
  field->add_option("--delta-over-j0", delta_over_j0);
  field->add_option("--grid", [&nx, &ny](const std::vector<std::string>& v) {
    if (v.size() != 2) return false;
    nx = std::stoi(v[0]);
    ny = std::stoi(v[1]);
    return true;
  }, "NX NY")->expected(2);
  field->add_option("--out", out)->required();

  auto* traj = app.add_subcommand("trajectories", "Bohmian trajectory ensemble");
  traj->add_option("--delta-over-j0", delta_over_j0);
  traj->add_option("--n", n, "trajectory count");
  traj->add_option("--dt", dt, "step size (natural units; 0 = auto)");
  traj->add_option("--tmax", t_max, "time span (natural units; 0 = auto)");
  traj->add_option("--out", out)->required();
  traj->add_option("--background-grid", out2, "also emit |Psi|^2 density CSV");

  auto* curve = app.add_subcommand("speed-curve", "energy-speed relation table");
  curve->add_option("--deltas", deltas_range, "start:stop:step in units of J0");
  curve->add_option("--out", out)->required();

  auto* val = app.add_subcommand("validate", "oracle validation suites");
  val->add_option("--suite", suite, "all|eigen|velocity|continuity|tdse");
  val->add_option("--out", out, "JSON report path");

  auto* fig = app.add_subcommand("figure1", "trajectory-plot reproduction data");
  fig->add_option("--n", n, "trajectories per panel");
  fig->add_option("--out", out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  RunContext ctx;
  ctx.config_path = config_path;
  ctx.seed = seed;
  try {
    ctx.config = load_config_json(config_path);
    ctx.subcommand = app.get_subcommands().front()->get_name();
    if (modes->parsed()) return cmd_modes(ctx, grid_n, out);
    if (packet->parsed()) return cmd_packet(ctx, x0_um, t0, t1, steps, out);
    if (field->parsed()) return cmd_field(ctx, delta_over_j0, nx, ny, out);
    if (traj->parsed())
      return cmd_trajectories(ctx, delta_over_j0, n, dt, t_max, out, out2);
    if (curve->parsed()) return cmd_speed_curve(ctx, deltas_range, out);
    if (val->parsed()) return cmd_validate(ctx, suite, out);
    if (fig->parsed()) return cmd_figure1(ctx, n, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
