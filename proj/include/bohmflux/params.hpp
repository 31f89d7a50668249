#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

namespace bohmflux {

namespace consts {
inline constexpr double hbar_eV_s = 6.582119569e-16;
inline constexpr double c_vacuum_m_s = 2.99792458e8;
}  // namespace consts

// All fields are stored in natural units: hbar = 1, c (medium) = 1, and the
// photon effective mass m = 1, so energies are fractions of m c^2, lengths are
// multiples of hbar/(m c) and times multiples of hbar/(m c^2). m_eV is the
// calibration scale used for SI conversion.
struct CavityParams {
  double m = 1.0;
  double V0 = 0.0;        // potential-step height
  double J0 = 0.0;        // inter-guide coupling
  double Gamma = 0.0;     // radiative loss rate
  double E0 = 0.0;        // dominant pulse energy
  double sigma = 0.0;     // spectral half-width of g(E)
  double guide_separation = 0.0;  // center-to-center distance
  double well_width = 0.0;        // transverse width of each guide
  double D0 = 0.0;        // cavity height (documentation input)
  int q = 1;              // longitudinal mode integer (documentation input)
  double n_medium = 1.4;
  double m_eV = 1.22;     // energy unit in eV

  double c_medium_m_s() const { return consts::c_vacuum_m_s / n_medium; }
  double energy_unit_eV() const { return m_eV; }
  double time_unit_s() const { return consts::hbar_eV_s / m_eV; }
  double length_unit_m() const { return consts::hbar_eV_s * c_medium_m_s() / m_eV; }
  double length_unit_um() const { return length_unit_m() * 1e6; }
  double velocity_unit_km_s() const { return c_medium_m_s() / 1e3; }

  double energy_from_eV(double eV) const { return eV / m_eV; }
  double energy_to_eV(double e) const { return e * m_eV; }
  double length_from_um(double um) const { return um * 1e-6 / length_unit_m(); }
  double length_to_um(double l) const { return l * length_unit_um(); }
};

// Total energy with its derived kinetic offset Delta = E - m - V0 + J0.
struct EnergyPoint {
  double E = 0.0;
  double Delta = 0.0;
};

enum class Regime { Propagative, Gap, Evanescent };

const char* regime_name(Regime r);

// Parses the SI-valued config document (eV, ps, ns, um) and converts to
// natural units. Throws std::invalid_argument on missing required fields or
// non-physical values.
CavityParams load_config(const nlohmann::json& doc);
CavityParams load_config_file(const std::string& path);

double kinetic_offset(double E, const CavityParams& p);
EnergyPoint energy_point(double E, const CavityParams& p);
double energy_from_delta(double Delta, const CavityParams& p);

// Evanescent iff Delta < -J0, propagative iff Delta > J0, gap otherwise.
Regime regime_of(double E, const CavityParams& p);

}  // namespace bohmflux
