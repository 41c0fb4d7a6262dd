#include "sepi/cavity.hpp"

#include <cmath>
#include <numbers>

#include "sepi/errors.hpp"

namespace sepi::cavity {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

void CavitySpec::validate() const {
  if (!(quality_factor > 0.0)) throw ValidationError("Q must be positive");
  if (!(mode_volume > 0.0)) throw ValidationError("mode volume must be positive");
  if (!(wavelength_m > 0.0)) throw ValidationError("wavelength must be positive");
  if (!(refractive_index >= 1.0)) throw ValidationError("refractive index must be >= 1");
}

double CavitySpec::absolute_volume_m3() const { return mode_volume * std::pow(wavelength_m / refractive_index, 3); }

double CavitySpec::angular_frequency() const { return kTwoPi * constants::c / wavelength_m; }

CooperativityResult cooperativity(double mu_debye, double linewidth_cm, const CavitySpec& cav) {
  cav.validate();
  if (!(mu_debye > 0.0)) throw ValidationError("dipole moment must be positive");
  if (!(linewidth_cm > 0.0)) throw ValidationError("linewidth must be positive");
  using namespace constants;
  const double omega = cav.angular_frequency();
  const double n2 = cav.refractive_index * cav.refractive_index;
  const double mu = mu_debye * debye;
  const double g = mu * std::sqrt(omega / (2.0 * hbar * eps0 * n2 * cav.absolute_volume_m3()));
  const double kappa = omega / cav.quality_factor;
  const double gamma = kTwoPi * c_cm * linewidth_cm;
  const double c_coop = 4.0 * g * g / (kappa * gamma);
  return {
      {g, 0.0, Unit::radian_per_second},
      {kappa, 0.0, Unit::radian_per_second},
      {gamma, 0.0, Unit::radian_per_second},
      {c_coop, 0.0, Unit::dimensionless},
  };
}

Quantity threshold_q(double mu_debye, double linewidth_cm, const CavitySpec& cav, double target_c) {
  if (!(target_c > 0.0)) throw ValidationError("target cooperativity must be positive");
  const CooperativityResult r = cooperativity(mu_debye, linewidth_cm, cav);
  // C is linear in Q.
  return {cav.quality_factor * target_c / r.cooperativity.value(), 0.0, Unit::dimensionless};
}

}  // namespace sepi::cavity
