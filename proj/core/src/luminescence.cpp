#include "sepi/luminescence.hpp"

#include <algorithm>
#include <cmath>

#include "sepi/errors.hpp"

namespace sepi::lum {

using spectra::PeakRegion;
using spectra::Spectrum;

namespace {

Quantity fraction_of(const Quantity& zpl, const Quantity& side) {
  const double z = zpl.value(), s = side.value();
  const double tot = z + s;
  if (!(tot > 0.0)) throw ValidationError("ZPL and sideband areas sum to zero");
  const double dz = s / (tot * tot), ds = -z / (tot * tot);
  return {z / tot, std::hypot(dz * zpl.uncertainty(), ds * side.uncertainty()), Unit::dimensionless};
}

double flank_mean(const Spectrum& s, double from, double to) {
  double sum = 0.0;
  int n = 0;
  const auto x = s.wavenumber();
  for (std::size_t i = 0; i < s.size(); ++i)
    if (x[i] >= from && x[i] <= to) sum += s.value()[i], ++n;
  if (n == 0) return s.value_at(std::clamp(0.5 * (from + to), s.lo(), s.hi()));
  return sum / n;
}

}  // namespace

PeakRegion default_sideband(const Spectrum& pl, const PeakRegion& zpl) {
  return {std::max(zpl.lo - default_sideband_width_cm, pl.lo()), zpl.lo, zpl.baseline};
}

ZplAnalysis zpl_fraction_from_areas(Quantity zpl_area, Quantity sideband_area, double mean_transmission) {
  if (zpl_area.value() < 0.0 || sideband_area.value() < 0.0) throw ValidationError("line areas must be >= 0");
  if (!(mean_transmission > 0.0 && mean_transmission <= 1.0))
    throw ValidationError("mean transmission must lie in (0, 1]");
  ZplAnalysis out{
      .zpl_area = zpl_area,
      .sideband_area = sideband_area,
      .mean_transmission = mean_transmission,
      .reabsorption_factor = 1.0 / mean_transmission,
      .fraction_raw = fraction_of(zpl_area, sideband_area),
      .fraction_corrected = {},
      .warnings = {},
  };
  out.fraction_corrected = fraction_of(zpl_area * out.reabsorption_factor, sideband_area);
  return out;
}

ZplAnalysis zpl_fraction(const Spectrum& pl, const PeakRegion& zpl, const PeakRegion& sideband,
                         const std::optional<Reabsorption>& reabsorption) {
  if (pl.kind() != spectra::SpectrumKind::luminescence) throw ValidationError("ZPL fraction needs a luminescence spectrum");
  zpl.validate(pl);
  sideband.validate(pl);
  if (zpl.overlaps(sideband)) throw ValidationError("ZPL and sideband regions overlap");

  const spectra::Baseline zb = spectra::estimate_baseline(pl, zpl);
  const Quantity za = spectra::integrate_line(pl, zpl, zb);
  const Quantity sa = spectra::integrate_line(pl, sideband);
  const Quantity z_clamped{std::max(0.0, za.value()), za.uncertainty(), Unit::dimensionless};
  const Quantity s_clamped{std::max(0.0, sa.value()), sa.uncertainty(), Unit::dimensionless};

  double transmission = 1.0;
  if (reabsorption) {
    if (!(reabsorption->path_cm >= 0.0)) throw ValidationError("effective path must be >= 0");
    // Observed-PL-weighted mean of exp(-alpha l) over the ZPL nodes.
    double num = 0.0, den = 0.0;
    const auto x = pl.wavenumber();
    const auto y = pl.value();
    for (std::size_t i = 0; i < pl.size(); ++i) {
      if (x[i] < zpl.lo || x[i] > zpl.hi) continue;
      const double w_left = i > 0 ? x[i] - x[i - 1] : 0.0;
      const double w_right = i + 1 < pl.size() ? x[i + 1] - x[i] : 0.0;
      const double weight = std::max(0.0, y[i] - zb.at(x[i])) * 0.5 * (w_left + w_right);
      const double a = reabsorption->alpha.value_at(x[i]);
      num += weight * std::exp(-a * reabsorption->path_cm);
      den += weight;
    }
    if (den > 0.0) transmission = num / den;
  }

  ZplAnalysis out = zpl_fraction_from_areas(z_clamped, s_clamped, transmission);

  // Flattened detector response check, from the samples outside both regions.
  const double lo = std::min(zpl.lo, sideband.lo), hi = std::max(zpl.hi, sideband.hi);
  const double w = 3.0 * pl.resolution();
  const double left = flank_mean(pl, lo - w, lo), right = flank_mean(pl, hi, hi + w);
  double peak = 0.0;
  for (std::size_t i = 0; i < pl.size(); ++i)
    if (pl.wavenumber()[i] >= sideband.lo && pl.wavenumber()[i] <= sideband.hi) peak = std::max(peak, pl.value()[i]);
  const double drift = std::abs(right - left) * (sideband.hi - sideband.lo) / (hi - lo);
  if (peak > 0.0 && drift > 0.1 * peak)
    out.warnings.push_back("PL baseline drifts by more than 10% across the sideband; check detector response flattening");
  return out;
}

Quantity total_radiative_lifetime(const Quantity& zpl_lifetime, const Quantity& zpl_fraction) {
  const Quantity tau = zpl_lifetime.in(Unit::second);
  const Quantity f = zpl_fraction.in(Unit::dimensionless);
  if (!(tau.value() > 0.0)) throw ValidationError("ZPL lifetime must be positive");
  if (!(f.value() > 0.0 && f.value() <= 1.0)) throw ValidationError("ZPL fraction must lie in (0, 1]");
  return multiply(tau, f, Unit::second);
}

EfficiencyResult radiative_efficiency(const Quantity& excited_lifetime, const Quantity& radiative_lifetime) {
  const Quantity ex = excited_lifetime.in(Unit::second);
  const Quantity rad = radiative_lifetime.in(Unit::second);
  if (!(ex.value() > 0.0) || !(rad.value() > 0.0)) throw ValidationError("lifetimes must be positive");
  if (ex.value() > rad.value())
    throw UnphysicalEfficiency("excited-state lifetime exceeds the radiative lifetime (efficiency > 1)");
  return {rad, ex, divide(ex, rad, Unit::dimensionless)};
}

}  // namespace sepi::lum
