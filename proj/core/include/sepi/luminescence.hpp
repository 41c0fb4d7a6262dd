#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sepi/spectra.hpp"
#include "sepi/units.hpp"

namespace sepi::lum {

/// Extent of the phonon sideband below the ZPL lower edge.
inline constexpr double default_sideband_width_cm = 700.0;

struct Reabsorption {
  spectra::Spectrum alpha;  // absorption coefficient over the ZPL, cm^-1
  double path_cm;           // effective single-pass path length
};

struct ZplAnalysis {
  Quantity zpl_area;
  Quantity sideband_area;
  double mean_transmission = 1.0;    // <exp(-alpha l)> over the ZPL profile
  double reabsorption_factor = 1.0;  // 1 / mean_transmission
  Quantity fraction_raw;
  Quantity fraction_corrected;
  std::vector<std::string> warnings;
};

/// [max(zpl.lo - 700, pl.lo), zpl.lo] with the ZPL region's baseline mode.
spectra::PeakRegion default_sideband(const spectra::Spectrum& pl, const spectra::PeakRegion& zpl);

/// ZPL fraction from integrated areas; the correction rescales the ZPL
/// area by the PL-weighted inverse single-pass transmission.
ZplAnalysis zpl_fraction(const spectra::Spectrum& pl, const spectra::PeakRegion& zpl,
                         const spectra::PeakRegion& sideband, const std::optional<Reabsorption>& reabsorption = {});

/// Same arithmetic from areas alone.
ZplAnalysis zpl_fraction_from_areas(Quantity zpl_area, Quantity sideband_area, double mean_transmission = 1.0);

/// tau_total = tau_ZPL x fraction.
Quantity total_radiative_lifetime(const Quantity& zpl_lifetime, const Quantity& zpl_fraction);

struct EfficiencyResult {
  Quantity total_radiative_lifetime;  // s
  Quantity excited_state_lifetime;    // s
  Quantity radiative_efficiency;      // dimensionless
};

/// eta = excited / radiative. Throws UnphysicalEfficiency when eta > 1.
EfficiencyResult radiative_efficiency(const Quantity& excited_lifetime, const Quantity& radiative_lifetime);

}  // namespace sepi::lum
