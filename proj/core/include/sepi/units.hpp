#pragma once

#include <numbers>
#include <string_view>

namespace sepi {

/// CODATA 2018 values, SI units.
struct PhysicalConstants {
  double bohr_magneton;        // J/T
  double nuclear_magneton;     // J/T
  double planck;               // J s
  double reduced_planck;       // J s
  double boltzmann;            // J/K
  double speed_of_light;       // m/s
  double vacuum_permittivity;  // F/m
  double debye;                // C m per D
  double electronvolt;         // J per eV
};

inline constexpr PhysicalConstants codata2018{
    .bohr_magneton = 9.2740100783e-24,
    .nuclear_magneton = 5.0507837461e-27,
    .planck = 6.62607015e-34,
    .reduced_planck = 6.62607015e-34 / (2.0 * std::numbers::pi),
    .boltzmann = 1.380649e-23,
    .speed_of_light = 299792458.0,
    .vacuum_permittivity = 8.8541878128e-12,
    // 1 D = 1e-21 / c  C m
    .debye = 1.0e-21 / 299792458.0,
    .electronvolt = 1.602176634e-19,
};

namespace constants {
inline constexpr double mu_b = codata2018.bohr_magneton;
inline constexpr double mu_n = codata2018.nuclear_magneton;
inline constexpr double h = codata2018.planck;
inline constexpr double hbar = codata2018.reduced_planck;
inline constexpr double k_b = codata2018.boltzmann;
inline constexpr double c = codata2018.speed_of_light;
inline constexpr double c_cm = codata2018.speed_of_light * 100.0;  // cm/s
inline constexpr double eps0 = codata2018.vacuum_permittivity;
inline constexpr double debye = codata2018.debye;
inline constexpr double ev = codata2018.electronvolt;
}  // namespace constants

enum class Dimension {
  photon_energy,
  length,
  time,
  temperature,
  magnetic_field,
  dipole_moment,
  dimensionless,
  attenuation,       // cm^-1 as an absorption coefficient, not an energy
  areal_density,     // cm^-2
  concentration,     // cm^-3
  rate,              // s^-1
  angular_rate,      // rad/s
  field_slope,       // Hz/T
  raman_coefficient, // s^-1 K^-9
  volume,            // m^3
};

enum class Unit {
  // photon energy / frequency
  joule,
  electronvolt,
  millielectronvolt,
  wavenumber,
  hertz,
  kilohertz,
  megahertz,
  gigahertz,
  // length, doubles as vacuum wavelength
  meter,
  centimeter,
  micrometer,
  nanometer,
  // time
  second,
  millisecond,
  microsecond,
  nanosecond,
  minute,
  hour,
  // temperature
  kelvin,
  millikelvin,
  // field
  tesla,
  millitesla,
  gauss,
  // dipole
  coulomb_meter,
  debye,
  // dimensionless
  dimensionless,
  percent,
  degree,
  // single-unit dimensions
  per_centimeter,
  per_square_centimeter,
  per_cubic_centimeter,
  per_second,
  radian_per_second,
  hertz_per_tesla,
  per_second_per_kelvin9,
  cubic_meter,
};

Dimension dimension_of(Unit u) noexcept;

/// Short ASCII label used in reports, e.g. "cm^-1", "us".
std::string_view unit_name(Unit u) noexcept;

/// A measured or derived value with a 1-sigma uncertainty.
class Quantity {
 public:
  Quantity() = default;
  Quantity(double value, double uncertainty, Unit unit);
  Quantity(double value, Unit unit) : Quantity(value, 0.0, unit) {}

  double value() const noexcept { return value_; }
  double uncertainty() const noexcept { return uncertainty_; }
  Unit unit() const noexcept { return unit_; }
  double relative_uncertainty() const noexcept;

  Quantity in(Unit target) const;

  // Uncorrelated-error arithmetic. Sums require identical units.
  friend Quantity operator+(const Quantity& a, const Quantity& b);
  friend Quantity operator-(const Quantity& a, const Quantity& b);
  friend Quantity operator*(const Quantity& a, double s);
  friend Quantity operator*(double s, const Quantity& a) { return a * s; }
  friend Quantity operator/(const Quantity& a, double s);

 private:
  double value_ = 0.0;
  double uncertainty_ = 0.0;
  Unit unit_ = Unit::dimensionless;
};

Quantity multiply(const Quantity& a, const Quantity& b, Unit result);
Quantity divide(const Quantity& a, const Quantity& b, Unit result);
/// a^p with relative uncertainty scaled by |p|.
Quantity power(const Quantity& a, double p, Unit result);

/// Rescale to `target`. Photon energies convert to and from vacuum
/// wavelengths through E = hc/lambda. Throws IncompatibleUnits.
Quantity convert(const Quantity& q, Unit target);

/// Convenience for scalar conversion of a bare value.
double convert_value(double value, Unit from, Unit to);

/// |a - b| <= k * sqrt(sa^2 + sb^2). Units must match.
bool agrees(const Quantity& a, const Quantity& b, double k = 1.0);

}  // namespace sepi
