#include "sepi/absorption.hpp"

#include <cmath>
#include <numbers>

#include "sepi/errors.hpp"

namespace sepi::absorption {

namespace {

constexpr double kPi = std::numbers::pi;

// 2 pi^2 nu~ / (3 eps0 h c) in SI: integrated cross-section per unit mu^2
// for an isotropically oriented dipole in vacuum.
double vacuum_cross_section_per_mu2(double wavenumber_m) {
  using namespace constants;
  return 2.0 * kPi * kPi * wavenumber_m / (3.0 * eps0 * h * c);
}

}  // namespace

std::string_view local_field_name(LocalField lf) noexcept {
  return lf == LocalField::none ? "none" : "lorentz";
}

std::optional<LocalField> parse_local_field(std::string_view s) noexcept {
  if (s == "none") return LocalField::none;
  if (s == "lorentz") return LocalField::lorentz;
  return std::nullopt;
}

void AbsorptionAnalysis::validate() const {
  if (!(integrated_alpha.value() > 0.0)) throw ValidationError("integrated absorption must be positive");
  if (!(concentration.value() > 0.0)) throw ValidationError("concentration must be positive");
  if (!(line_center_cm > 0.0)) throw ValidationError("line center must be positive");
  if (!(refractive_index >= 1.0)) throw ValidationError("refractive index must be >= 1");
  if (peak_alpha && !(peak_alpha->value() > 0.0)) throw ValidationError("peak absorption must be positive");
}

Quantity conversion_factor(const AbsorptionAnalysis& a) {
  a.validate();
  return divide(a.concentration, a.integrated_alpha, Unit::per_centimeter);
}

Quantity peak_conversion_factor(const AbsorptionAnalysis& a) {
  a.validate();
  if (!a.peak_alpha) throw ValidationError("peak conversion factor needs alpha_max");
  return divide(a.concentration, *a.peak_alpha, Unit::per_square_centimeter);
}

double medium_factor(LocalField lf, double n) {
  const double lorentz = (n * n + 2.0) / 3.0;
  return lf == LocalField::none ? 1.0 / n : lorentz * lorentz / n;
}

double integrated_cross_section_cm(double mu_debye, double wavenumber_cm, double n, LocalField lf) {
  const double mu = mu_debye * constants::debye;
  const double s_m = vacuum_cross_section_per_mu2(wavenumber_cm * 100.0) * mu * mu * medium_factor(lf, n);
  return s_m * 100.0;
}

double einstein_a(double mu_debye, double wavenumber_cm, double n, LocalField lf) {
  using namespace constants;
  const double mu = mu_debye * debye;
  const double omega = 2.0 * kPi * c * wavenumber_cm * 100.0;
  const double vac = std::pow(omega, 3) * mu * mu / (3.0 * kPi * eps0 * hbar * std::pow(c, 3));
  // Emission picks up n^2 relative to the absorption medium factor.
  return vac * medium_factor(lf, n) * n * n;
}

DipoleResult dipole_moment(const AbsorptionAnalysis& a, LocalField lf) {
  a.validate();
  const double per_center_cm = a.integrated_alpha.value() / a.concentration.value();
  const double unit_cs = integrated_cross_section_cm(1.0, a.line_center_cm, a.refractive_index, lf);
  const double mu = std::sqrt(per_center_cm / unit_cs);
  const double rel_mu = 0.5 * std::hypot(a.integrated_alpha.relative_uncertainty(), a.concentration.relative_uncertainty());

  const double rate = einstein_a(mu, a.line_center_cm, a.refractive_index, lf);
  const double tau = 1.0 / rate;

  DipoleResult out{
      .mu = {mu, mu * rel_mu, Unit::debye},
      .zpl_radiative_lifetime = {tau, tau * 2.0 * rel_mu, Unit::second},
      .convention = lf,
      .notes = {},
  };
  out.notes.push_back(std::string("local-field convention: ") + std::string(local_field_name(lf)));
  out.notes.push_back("level degeneracies g2/g1 = 1 assumed");
  out.notes.push_back("isotropic dipole orientation average (1/3)");
  return out;
}

LocalField select_local_field(const AbsorptionAnalysis& reference, double target_mu_debye) {
  const double none = dipole_moment(reference, LocalField::none).mu.value();
  const double lorentz = dipole_moment(reference, LocalField::lorentz).mu.value();
  return std::abs(none - target_mu_debye) <= std::abs(lorentz - target_mu_debye) ? LocalField::none
                                                                                  : LocalField::lorentz;
}

double gaussian_peak_from_area(double area, double fwhm) {
  return area * 2.0 * std::sqrt(std::log(2.0) / kPi) / fwhm;
}

}  // namespace sepi::absorption
