#include <doctest.h>

#include <nlohmann/json.hpp>

#include "bohmflux/params.hpp"

using namespace bohmflux;
using nlohmann::json;

namespace {

json base_config() {
  return json{{"m_eV", 1.22},        {"V0_eV", 1e-3},
              {"J0_eV", 3.05e-5},    {"lifetime_ps", 270.0},
              {"pulse_ns", 26.0},    {"delta_over_J0", -2.0},
              {"guide_separation_um", 20.0}};
}

}  // namespace

TEST_CASE("lifetime converts to Gamma in eV") {
  auto p = load_config(base_config());
  // hbar / 270 ps = 2.437e-6 eV
  CHECK(p.energy_to_eV(p.Gamma) == doctest::Approx(2.437e-6).epsilon(1e-3));
}

TEST_CASE("pulse duration converts to sigma in eV") {
  auto p = load_config(base_config());
  CHECK(p.energy_to_eV(p.sigma) == doctest::Approx(2.53e-8).epsilon(2e-3));
}

TEST_CASE("default mass calibration gives Gamma/2m near 1e-6") {
  auto p = load_config(base_config());
  CHECK(p.Gamma / (2.0 * p.m) == doctest::Approx(1.0e-6).epsilon(2e-3));
}

TEST_CASE("kinetic offset definition") {
  auto p = load_config(base_config());
  CHECK(kinetic_offset(p.m + p.V0 - p.J0, p) == doctest::Approx(0.0));
  CHECK(kinetic_offset(p.m + p.V0, p) == doctest::Approx(p.J0));
  CHECK(kinetic_offset(p.m + p.V0 - 3.0 * p.J0, p) ==
        doctest::Approx(-2.0 * p.J0));
}

TEST_CASE("regime classification including boundaries") {
  auto p = load_config(base_config());
  auto E = [&](double delta_over_j0) {
    return energy_from_delta(delta_over_j0 * p.J0, p);
  };
  CHECK(regime_of(E(-2.0), p) == Regime::Evanescent);
  CHECK(regime_of(E(2.0), p) == Regime::Propagative);
  CHECK(regime_of(E(0.0), p) == Regime::Gap);
  CHECK(regime_of(E(1.0), p) == Regime::Gap);
  CHECK(regime_of(E(-1.0), p) == Regime::Gap);
}

TEST_CASE("config E0 from delta_over_J0") {
  auto p = load_config(base_config());
  CHECK(kinetic_offset(p.E0, p) == doctest::Approx(-2.0 * p.J0).epsilon(1e-12));
}

TEST_CASE("missing and invalid fields are rejected") {
  auto cfg = base_config();
  cfg.erase("V0_eV");
  CHECK_THROWS_AS(load_config(cfg), std::invalid_argument);

  cfg = base_config();
  cfg["J0_eV"] = -1.0;
  CHECK_THROWS_AS(load_config(cfg), std::invalid_argument);

  cfg = base_config();
  cfg["lifetime_ps"] = -5.0;
  CHECK_THROWS_AS(load_config(cfg), std::invalid_argument);

  cfg = base_config();
  cfg.erase("delta_over_J0");
  CHECK_THROWS_AS(load_config(cfg), std::invalid_argument);
}

TEST_CASE("natural -> SI -> natural round trip at 1e-12") {
  auto p = load_config(base_config());
  const double fields[] = {p.V0, p.J0, p.Gamma, p.sigma, p.E0};
  for (double f : fields)
    CHECK(p.energy_from_eV(p.energy_to_eV(f)) ==
          doctest::Approx(f).epsilon(1e-12));
  const double lengths[] = {p.guide_separation, p.well_width, p.D0};
  for (double l : lengths)
    CHECK(p.length_from_um(p.length_to_um(l)) ==
          doctest::Approx(l).epsilon(1e-12));
}

TEST_CASE("guide separation default is 20 um") {
  auto cfg = base_config();
  cfg.erase("guide_separation_um");
  auto p = load_config(cfg);
  CHECK(p.length_to_um(p.guide_separation) == doctest::Approx(20.0));
}
