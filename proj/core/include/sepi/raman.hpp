#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sepi/spectra.hpp"
#include "sepi/units.hpp"

namespace sepi::raman {

inline constexpr double default_tolerance_cm = 0.5;

struct RamanSession {
  std::vector<double> laser_cm;             // one per spectrum
  std::vector<spectra::Spectrum> spectra;
  double match_tolerance = default_tolerance_cm;

  void validate() const;
};

enum class FeatureClass { raman, photoluminescence, unclassified };

std::string_view class_name(FeatureClass c) noexcept;

struct FeatureTrack {
  std::vector<double> laser_cm;                // copied from the session
  std::vector<std::optional<double>> centers;  // per spectrum; empty slot = not matched
  FeatureClass classification = FeatureClass::unclassified;
  double offset_mean = 0.0;  // laser - center
  double offset_std = 0.0;
  double position_mean = 0.0;
  double position_std = 0.0;

  std::size_t matched() const noexcept;
};

/// Peaks per spectrum, then greedy nearest-neighbour association under a
/// constant-position and a constant-laser-offset hypothesis. Each peak
/// supports at most one track; leftovers become unclassified singletons.
std::vector<FeatureTrack> track_features(const RamanSession& session, double min_prominence);

/// Mean laser offset with its standard error. ClassificationError unless raman.
Quantity mean_offset(const FeatureTrack& track);

struct NullSearchEntry {
  double expected_offset;
  bool detected = false;
  bool out_of_window = false;
  std::optional<double> matched_offset;
};

std::vector<NullSearchEntry> null_search(const RamanSession& session, std::span<const double> expected_offsets,
                                         double min_prominence);

}  // namespace sepi::raman
