#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sepi/fitcore.hpp"
#include "sepi/units.hpp"

namespace sepi::mod {

/// Hole-burning upper bound on the homogeneous linewidth, cm^-1.
inline constexpr double hole_burning_linewidth_cm = 0.001;

struct Response {
  double amplitude;  // normalized
  double phase_deg;  // lag is negative
};

/// Single-pole low-pass: A = 1/sqrt(1 + (2 pi f T1)^2), phase = -atan(2 pi f T1).
Response response_model(double frequency_hz, double t1_s);

struct ModulationDataset {
  std::vector<double> frequency_hz;
  std::vector<double> amplitude;
  std::vector<double> phase_deg;
  std::vector<double> reference_amplitude;  // empty when already corrected
  std::vector<double> reference_phase_deg;

  std::size_t size() const noexcept { return frequency_hz.size(); }
  bool has_reference() const noexcept { return !reference_amplitude.empty(); }
  void validate() const;
};

/// Divides out the instrument amplitude and subtracts its phase.
ModulationDataset correct_instrument(const ModulationDataset& d);

/// Pointwise mean onto the first dataset's grid (linear interpolation for
/// the others, which must cover that grid).
ModulationDataset average_datasets(std::span<const ModulationDataset> sets);

enum class FitMode { amplitude, phase, joint };

struct LifetimeResult {
  Quantity t1;                     // s
  Quantity critical_frequency;     // Hz
  Quantity homogeneous_linewidth;  // cm^-1
  double amplitude_scale = 1.0;
  std::optional<Quantity> phase_offset;  // deg, when enabled
  std::vector<std::string> warnings;
  fit::FitResult raw;
};

Quantity critical_frequency(const Quantity& t1);
Quantity homogeneous_linewidth(const Quantity& t1);

/// Fits the response with a free amplitude prefactor (amplitude/joint) and an
/// optional constant phase offset. Phases must lie in (-90, 0] unless the
/// offset is fitted.
LifetimeResult fit_lifetime(const ModulationDataset& d, FitMode mode, bool fit_phase_offset = false);

}  // namespace sepi::mod
