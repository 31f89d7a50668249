#include "bohmflux/model.hpp"

#include <cmath>
#include <stdexcept>

namespace bohmflux {

Model build_model(const CavityParams& p, int grid_N) {
  Model model;
  model.params = p;

  DoubleWellGeometry g;
  g.well_width = p.well_width;
  g.separation = p.guide_separation;
  g.V0 = p.V0;
  g.well_depth = 1e-2;  // bracket search in calibrate_J0 takes it from here

  GridSpec grid;
  // Three mode-widths of padding: enough room for the evanescent tails, while
  // keeping the weakly-bound doublet splitting able to reach the target J0.
  grid.L_y = 0.5 * p.guide_separation + 3.0 * p.well_width;
  grid.N = grid_N > 0 ? grid_N : 4001;

  model.geometry = calibrate_J0(p.J0, g, grid, p.m, 5e-3, &model.basis);
  model.potential = build_double_well(model.geometry, grid);
  model.modes = grid_modes(model.basis);
  return model;
}

Field2D make_field(const Model& model, double Delta, bool with_gamma) {
  CavityParams p = model.params;
  // Use the effective level positions of the solved basis so the 2D field is
  // an exact stationary solution even with a loose calibration tolerance.
  p.J0 = model.basis.J0_eff();
  p.V0 = model.basis.E0_eff() + p.J0;
  const double gamma = with_gamma ? p.Gamma : 0.0;
  const Wavevectors kv = wavevectors(energy_from_delta(Delta, p), p, gamma);
  return Field2D(kv, model.modes, p.m, gamma);
}

}  // namespace bohmflux
