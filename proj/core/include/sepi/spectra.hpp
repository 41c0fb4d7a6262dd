#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sepi/units.hpp"

namespace sepi::spectra {

enum class SpectrumKind { intensity, absorption_coefficient, luminescence };

/// Ordered (wavenumber, value) series. Immutable once built.
class Spectrum {
 public:
  Spectrum(std::vector<double> wavenumber_cm, std::vector<double> value, SpectrumKind kind, double resolution_cm);

  std::span<const double> wavenumber() const noexcept { return wavenumber_; }
  std::span<const double> value() const noexcept { return value_; }
  SpectrumKind kind() const noexcept { return kind_; }
  double resolution() const noexcept { return resolution_; }
  std::size_t size() const noexcept { return value_.size(); }
  double lo() const noexcept { return wavenumber_.front(); }
  double hi() const noexcept { return wavenumber_.back(); }
  double median_spacing() const;

  /// Linear interpolation; throws BoundsError outside [lo, hi].
  double value_at(double x) const;

  Spectrum scaled(double factor) const;
  /// Translates the axis by `delta` cm^-1.
  Spectrum shifted(double delta) const;
  Spectrum with_kind(SpectrumKind kind) const;

 private:
  std::vector<double> wavenumber_;
  std::vector<double> value_;
  SpectrumKind kind_;
  double resolution_;
};

/// Linear resampling onto `grid`; every grid point must lie in [s.lo, s.hi].
Spectrum resample(const Spectrum& s, std::span<const double> grid);

enum class BaselineMode { none, constant, linear };

struct PeakRegion {
  double lo;
  double hi;
  BaselineMode baseline = BaselineMode::constant;

  void validate(const Spectrum& s) const;
  bool overlaps(const PeakRegion& other) const noexcept { return lo < other.hi && other.lo < hi; }
};

struct Baseline {
  double offset = 0.0;
  double slope = 0.0;   // per cm^-1, about `anchor`
  double anchor = 0.0;
  double noise = 0.0;   // rms scatter of flank samples about the fit

  double at(double x) const noexcept { return offset + slope * (x - anchor); }
};

/// Fits the baseline on flanking windows of width 3 x resolution just
/// outside [lo, hi]. Falls back to the boundary values when no flank
/// samples exist.
Baseline estimate_baseline(const Spectrum& s, const PeakRegion& region);

/// Trapezoidal integral of (value - baseline) over [lo, hi].
Quantity integrate_line(const Spectrum& s, const PeakRegion& region);
Quantity integrate_line(const Spectrum& s, const PeakRegion& region, const Baseline& baseline);

struct AbsorptionSpectrum {
  Spectrum alpha;                      // cm^-1
  std::vector<std::size_t> excluded;  // sample indices dropped
  std::vector<std::string> warnings;
};

/// alpha = -(1/L) ln(I_s / I_0). Non-positive sample intensities are
/// excluded; a non-positive reference raises DataError.
AbsorptionSpectrum absorption_coefficient(const Spectrum& sample, const Spectrum& reference, double length_cm);

/// Inverse of absorption_coefficient for a given alpha profile: I_s = I_0 exp(-alpha L).
Spectrum beer_lambert_transmission(const Spectrum& alpha, const Spectrum& reference, double length_cm);

struct Peak {
  double center;      // cm^-1, parabolic refinement
  double height;      // parabola vertex value
  double fwhm;        // cm^-1, at half prominence
  double prominence;
};

/// Local maxima with prominence >= min_prominence, ascending in center.
std::vector<Peak> find_peaks(const Spectrum& s, double min_prominence);

}  // namespace sepi::spectra
