#include "sepi/units.hpp"

#include <cmath>
#include <string>

#include "sepi/errors.hpp"

namespace sepi {

namespace {

struct UnitInfo {
  Dimension dim;
  double scale;  // canonical SI value of one unit
  std::string_view name;
};

constexpr double kHc = constants::h * constants::c;

UnitInfo info(Unit u) noexcept {
  using D = Dimension;
  switch (u) {
    case Unit::joule: return {D::photon_energy, 1.0, "J"};
    case Unit::electronvolt: return {D::photon_energy, constants::ev, "eV"};
    case Unit::millielectronvolt: return {D::photon_energy, 1e-3 * constants::ev, "meV"};
    case Unit::wavenumber: return {D::photon_energy, kHc * 100.0, "cm^-1"};
    case Unit::hertz: return {D::photon_energy, constants::h, "Hz"};
    case Unit::kilohertz: return {D::photon_energy, 1e3 * constants::h, "kHz"};
    case Unit::megahertz: return {D::photon_energy, 1e6 * constants::h, "MHz"};
    case Unit::gigahertz: return {D::photon_energy, 1e9 * constants::h, "GHz"};
    case Unit::meter: return {D::length, 1.0, "m"};
    case Unit::centimeter: return {D::length, 1e-2, "cm"};
    case Unit::micrometer: return {D::length, 1e-6, "um"};
    case Unit::nanometer: return {D::length, 1e-9, "nm"};
    case Unit::second: return {D::time, 1.0, "s"};
    case Unit::millisecond: return {D::time, 1e-3, "ms"};
    case Unit::microsecond: return {D::time, 1e-6, "us"};
    case Unit::nanosecond: return {D::time, 1e-9, "ns"};
    case Unit::minute: return {D::time, 60.0, "min"};
    case Unit::hour: return {D::time, 3600.0, "h"};
    case Unit::kelvin: return {D::temperature, 1.0, "K"};
    case Unit::millikelvin: return {D::temperature, 1e-3, "mK"};
    case Unit::tesla: return {D::magnetic_field, 1.0, "T"};
    case Unit::millitesla: return {D::magnetic_field, 1e-3, "mT"};
    case Unit::gauss: return {D::magnetic_field, 1e-4, "G"};
    case Unit::coulomb_meter: return {D::dipole_moment, 1.0, "C m"};
    case Unit::debye: return {D::dipole_moment, constants::debye, "D"};
    case Unit::dimensionless: return {D::dimensionless, 1.0, "1"};
    case Unit::percent: return {D::dimensionless, 1e-2, "%"};
    case Unit::degree: return {D::dimensionless, 3.14159265358979323846 / 180.0, "deg"};
    case Unit::per_centimeter: return {D::attenuation, 1.0, "cm^-1"};
    case Unit::per_square_centimeter: return {D::areal_density, 1.0, "cm^-2"};
    case Unit::per_cubic_centimeter: return {D::concentration, 1.0, "cm^-3"};
    case Unit::per_second: return {D::rate, 1.0, "s^-1"};
    case Unit::radian_per_second: return {D::angular_rate, 1.0, "rad/s"};
    case Unit::hertz_per_tesla: return {D::field_slope, 1.0, "Hz/T"};
    case Unit::per_second_per_kelvin9: return {D::raman_coefficient, 1.0, "s^-1 K^-9"};
    case Unit::cubic_meter: return {D::volume, 1.0, "m^3"};
  }
  return {D::dimensionless, 1.0, "?"};
}

}  // namespace

Dimension dimension_of(Unit u) noexcept { return info(u).dim; }

std::string_view unit_name(Unit u) noexcept { return info(u).name; }

Quantity::Quantity(double value, double uncertainty, Unit unit)
    : value_(value), uncertainty_(uncertainty), unit_(unit) {
  if (!(uncertainty >= 0.0)) {
    throw ValidationError("uncertainty must be non-negative, got " + std::to_string(uncertainty));
  }
}

double Quantity::relative_uncertainty() const noexcept {
  return value_ == 0.0 ? 0.0 : uncertainty_ / std::abs(value_);
}

Quantity Quantity::in(Unit target) const { return convert(*this, target); }

Quantity operator+(const Quantity& a, const Quantity& b) {
  if (a.unit_ != b.unit_) throw IncompatibleUnits("cannot add quantities with different units");
  return {a.value_ + b.value_, std::hypot(a.uncertainty_, b.uncertainty_), a.unit_};
}

Quantity operator-(const Quantity& a, const Quantity& b) {
  if (a.unit_ != b.unit_) throw IncompatibleUnits("cannot subtract quantities with different units");
  return {a.value_ - b.value_, std::hypot(a.uncertainty_, b.uncertainty_), a.unit_};
}

Quantity operator*(const Quantity& a, double s) {
  return {a.value_ * s, a.uncertainty_ * std::abs(s), a.unit_};
}

Quantity operator/(const Quantity& a, double s) {
  return {a.value_ / s, a.uncertainty_ / std::abs(s), a.unit_};
}

Quantity multiply(const Quantity& a, const Quantity& b, Unit result) {
  const double v = a.value() * b.value();
  const double u = std::hypot(a.uncertainty() * b.value(), b.uncertainty() * a.value());
  return {v, u, result};
}

Quantity divide(const Quantity& a, const Quantity& b, Unit result) {
  if (b.value() == 0.0) throw ValidationError("division by a zero-valued quantity");
  const double v = a.value() / b.value();
  const double u = std::hypot(a.uncertainty() / b.value(), a.value() * b.uncertainty() / (b.value() * b.value()));
  return {v, std::abs(u), result};
}

Quantity power(const Quantity& a, double p, Unit result) {
  const double v = std::pow(a.value(), p);
  return {v, std::abs(v * p) * a.relative_uncertainty(), result};
}

Quantity convert(const Quantity& q, Unit target) {
  const UnitInfo from = info(q.unit());
  const UnitInfo to = info(target);
  if (from.dim == to.dim) {
    const double factor = from.scale / to.scale;
    return {q.value() * factor, q.uncertainty() * factor, target};
  }
  const bool reciprocal = (from.dim == Dimension::photon_energy && to.dim == Dimension::length) ||
                          (from.dim == Dimension::length && to.dim == Dimension::photon_energy);
  if (!reciprocal) {
    throw IncompatibleUnits("cannot convert " + std::string(from.name) + " to " + std::string(to.name));
  }
  if (q.value() == 0.0) {
    throw ValidationError("zero photon energy or wavelength has no reciprocal counterpart");
  }
  // E = hc / lambda; relative uncertainty is preserved.
  const double si = q.value() * from.scale;
  const double out = kHc / si / to.scale;
  return {out, std::abs(out) * q.relative_uncertainty(), target};
}

double convert_value(double value, Unit from, Unit to) {
  return convert(Quantity{value, from}, to).value();
}

bool agrees(const Quantity& a, const Quantity& b, double k) {
  if (a.unit() != b.unit()) throw IncompatibleUnits("agreement check needs matching units");
  return std::abs(a.value() - b.value()) <= k * std::hypot(a.uncertainty(), b.uncertainty());
}

}  // namespace sepi
