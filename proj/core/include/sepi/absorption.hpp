#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sepi/units.hpp"

namespace sepi::absorption {

inline constexpr double silicon_refractive_index = 3.44;  // at 2.9 um
inline constexpr double zpl_wavenumber_cm = 3444.0;       // 1s:A -> 1s:T2:G7, ~427 meV

/// Local-field treatment of the dipole in a dielectric host.
///  none:    cross-section scales as 1/n, A21 as n
///  lorentz: extra ((n^2 + 2) / 3)^2 on both
enum class LocalField { none, lorentz };

std::string_view local_field_name(LocalField lf) noexcept;
std::optional<LocalField> parse_local_field(std::string_view s) noexcept;

struct AbsorptionAnalysis {
  Quantity integrated_alpha;  // cm^-2
  Quantity concentration;     // cm^-3
  double line_center_cm = zpl_wavenumber_cm;
  double refractive_index = silicon_refractive_index;
  std::optional<Quantity> peak_alpha;  // cm^-1

  void validate() const;
};

struct DipoleResult {
  Quantity mu;                      // D
  Quantity zpl_radiative_lifetime;  // s
  LocalField convention = LocalField::none;
  std::vector<std::string> notes;
};

/// f = [N] / integral(alpha d nu), cm^-1.
Quantity conversion_factor(const AbsorptionAnalysis& a);

/// k = [N] / alpha_max, cm^-2.
Quantity peak_conversion_factor(const AbsorptionAnalysis& a);

/// Multiplier on the vacuum integrated cross-section in the host medium.
double medium_factor(LocalField lf, double n);

/// Integrated cross-section over wavenumber (cm) for a dipole mu (D).
double integrated_cross_section_cm(double mu_debye, double wavenumber_cm, double n, LocalField lf);

/// Spontaneous emission rate A21 (s^-1) for equal level degeneracies.
double einstein_a(double mu_debye, double wavenumber_cm, double n, LocalField lf);

DipoleResult dipole_moment(const AbsorptionAnalysis& a, LocalField lf = LocalField::none);

/// Picks the local-field convention whose dipole for `reference` lies
/// closest to `target_mu_debye`.
LocalField select_local_field(const AbsorptionAnalysis& reference, double target_mu_debye);

/// Peak of a Gaussian line with the given area and fwhm.
double gaussian_peak_from_area(double area, double fwhm);

}  // namespace sepi::absorption
