#include "bohmflux/params.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace bohmflux {

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::Propagative: return "propagative";
    case Regime::Gap: return "gap";
    case Regime::Evanescent: return "evanescent";
  }
  return "?";
}

namespace {

double require_number(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_number())
    throw std::invalid_argument(std::string("config: missing field '") + key + "'");
  return doc[key].get<double>();
}

double get_or(const nlohmann::json& doc, const char* key, double def) {
  if (!doc.contains(key)) return def;
  return doc[key].get<double>();
}

}  // namespace

CavityParams load_config(const nlohmann::json& doc) {
  CavityParams p;
  p.m_eV = get_or(doc, "m_eV", 1.22);
  p.n_medium = get_or(doc, "n_medium", 1.4);
  if (p.m_eV <= 0) throw std::invalid_argument("config: m_eV must be > 0");
  if (p.n_medium <= 0) throw std::invalid_argument("config: n_medium must be > 0");

  const double V0_eV = require_number(doc, "V0_eV");
  const double J0_eV = require_number(doc, "J0_eV");
  const double lifetime_ps = require_number(doc, "lifetime_ps");
  const double pulse_ns = require_number(doc, "pulse_ns");
  if (J0_eV <= 0) throw std::invalid_argument("config: J0_eV must be > 0");
  if (lifetime_ps < 0) throw std::invalid_argument("config: lifetime_ps must be >= 0");
  if (pulse_ns <= 0) throw std::invalid_argument("config: pulse_ns must be > 0");

  p.m = 1.0;
  p.V0 = p.energy_from_eV(V0_eV);
  p.J0 = p.energy_from_eV(J0_eV);
  // Gamma = hbar / lifetime, sigma = hbar / pulse duration.
  p.Gamma = lifetime_ps > 0
                ? p.energy_from_eV(consts::hbar_eV_s / (lifetime_ps * 1e-12))
                : 0.0;
  p.sigma = p.energy_from_eV(consts::hbar_eV_s / (pulse_ns * 1e-9));
  if (p.sigma <= 0) throw std::invalid_argument("config: sigma must be > 0");

  if (doc.contains("E0_eV")) {
    p.E0 = p.energy_from_eV(doc["E0_eV"].get<double>());
  } else if (doc.contains("delta_over_J0")) {
    const double r = doc["delta_over_J0"].get<double>();
    p.E0 = p.m + p.V0 + (r - 1.0) * p.J0;
  } else {
    throw std::invalid_argument("config: need either E0_eV or delta_over_J0");
  }

  p.guide_separation = p.length_from_um(get_or(doc, "guide_separation_um", 20.0));
  p.well_width = p.length_from_um(get_or(doc, "well_width_um", 5.0));
  p.D0 = p.length_from_um(get_or(doc, "D0_um", 15.0));
  p.q = static_cast<int>(get_or(doc, "q", 1));
  if (p.guide_separation <= 0 || p.well_width <= 0)
    throw std::invalid_argument("config: guide geometry must be positive");

  return p;
}

CavityParams load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  nlohmann::json doc = nlohmann::json::parse(in);
  return load_config(doc);
}

double kinetic_offset(double E, const CavityParams& p) {
  return E - p.m - p.V0 + p.J0;
}

EnergyPoint energy_point(double E, const CavityParams& p) {
  return {E, kinetic_offset(E, p)};
}

double energy_from_delta(double Delta, const CavityParams& p) {
  return Delta + p.m + p.V0 - p.J0;
}

Regime regime_of(double E, const CavityParams& p) {
  const double d = kinetic_offset(E, p);
  if (d < -p.J0) return Regime::Evanescent;
  if (d > p.J0) return Regime::Propagative;
  return Regime::Gap;
}

}  // namespace bohmflux
