#pragma once

#include "bohmflux/eigenmodes.hpp"
#include "bohmflux/params.hpp"
#include "bohmflux/stationary2d.hpp"

namespace bohmflux {

// Params + calibrated double well + hybridized transverse modes: the shared
// setup behind the CLI subcommands.
struct Model {
  CavityParams params;
  DoubleWellGeometry geometry;
  PotentialGrid potential;
  ModeBasis basis;
  ModePair modes;
};

// Calibrates the well depth so the mode splitting reproduces params.J0, then
// hybridizes. grid_N = 0 picks a default resolution.
Model build_model(const CavityParams& p, int grid_N = 0);

// Field at kinetic offset Delta; with_gamma = false forces the lossless field.
Field2D make_field(const Model& model, double Delta, bool with_gamma = true);

}  // namespace bohmflux
