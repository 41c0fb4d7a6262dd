#pragma once

#include "sepi/units.hpp"

namespace sepi::cavity {

struct CavitySpec {
  double quality_factor = 1.5e4;
  double mode_volume = 1.0;  // in units of (lambda/n)^3
  double wavelength_m = 2.9e-6;
  double refractive_index = 3.44;

  void validate() const;
  double absolute_volume_m3() const;
  double angular_frequency() const;  // rad/s, vacuum wavelength
};

/// All rates are angular (rad/s); gamma and kappa are full widths.
struct CooperativityResult {
  Quantity g;
  Quantity kappa;
  Quantity gamma;
  Quantity cooperativity;
};

/// g = mu sqrt(omega / (2 hbar eps0 n^2 V)), kappa = omega/Q,
/// gamma = 2 pi c linewidth, C = 4 g^2 / (kappa gamma).
CooperativityResult cooperativity(double mu_debye, double linewidth_cm, const CavitySpec& cav);

/// Q at which cooperativity reaches target_c with everything else fixed.
Quantity threshold_q(double mu_debye, double linewidth_cm, const CavitySpec& cav, double target_c);

}  // namespace sepi::cavity
