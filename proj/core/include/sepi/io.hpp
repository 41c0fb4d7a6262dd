#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "sepi/modulation.hpp"
#include "sepi/relaxation.hpp"
#include "sepi/spectra.hpp"

namespace sepi::io {

/// Column-major numeric table. `header` is empty when the source had none.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  std::size_t rows() const noexcept { return columns.empty() ? 0 : columns.front().size(); }
};

/// Comma- or whitespace-separated numbers; one optional non-numeric header line;
/// '#' starts a comment. Missing files raise ValidationError naming the path.
Table parse_table(std::istream& in, const std::string& source = "<stream>");
Table read_table(const std::filesystem::path& path);

/// Shortest round-trip formatting.
std::string format_number(double v);
void write_table(std::ostream& out, const Table& t);
void write_table(const std::filesystem::path& path, const Table& t);

spectra::Spectrum read_spectrum(const std::filesystem::path& path, spectra::SpectrumKind kind, double resolution_cm);
Table spectrum_table(const spectra::Spectrum& s);

std::vector<relax::Point> read_points(const std::filesystem::path& path);
Table points_table(const std::vector<relax::Point>& pts);

relax::PolarizationDecaySeries read_decay(const std::filesystem::path& path, double temperature_k = 0.0);
Table decay_table(const relax::PolarizationDecaySeries& d);

mod::ModulationDataset read_modulation(const std::filesystem::path& path);
Table modulation_table(const mod::ModulationDataset& d);

}  // namespace sepi::io
