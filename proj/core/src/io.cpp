#include "sepi/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "sepi/errors.hpp"

namespace sepi::io {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  if (line.find(',') != std::string::npos) {
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  } else {
    std::istringstream ss(line);
    std::string cell;
    while (ss >> cell) out.push_back(cell);
  }
  return out;
}

bool to_double(const std::string& s, double& v) {
  if (s.empty()) return false;
  const char* b = s.data();
  if (*b == '+') ++b;
  const auto [p, ec] = std::from_chars(b, s.data() + s.size(), v);
  return ec == std::errc() && p == s.data() + s.size();
}

const std::vector<double>& column(const Table& t, std::size_t i, const std::string& what) {
  if (i >= t.columns.size()) throw ValidationError(what + ": expected at least " + std::to_string(i + 1) + " columns");
  return t.columns[i];
}

}  // namespace

Table parse_table(std::istream& in, const std::string& source) {
  Table t;
  std::string raw;
  std::size_t row = 0;
  bool seen_header = false;
  while (std::getline(in, raw)) {
    if (const auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto cells = split(line);
    std::vector<double> vals(cells.size());
    bool numeric = true;
    for (std::size_t i = 0; i < cells.size() && numeric; ++i) numeric = to_double(cells[i], vals[i]);
    if (!numeric) {
      if (row == 0 && !seen_header) {
        t.header = cells;
        seen_header = true;
        continue;
      }
      throw DataError(source + ": non-numeric value in data row " + std::to_string(row), row);
    }
    if (t.columns.empty()) t.columns.resize(vals.size());
    if (vals.size() != t.columns.size())
      throw DataError(source + ": row " + std::to_string(row) + " has " + std::to_string(vals.size()) +
                          " columns, expected " + std::to_string(t.columns.size()),
                      row);
    for (std::size_t i = 0; i < vals.size(); ++i) t.columns[i].push_back(vals[i]);
    ++row;
  }
  if (row == 0) throw ValidationError(source + ": no data rows");
  return t;
}

Table read_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open input file: " + path.string());
  return parse_table(in, path.string());
}

std::string format_number(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void write_table(std::ostream& out, const Table& t) {
  for (std::size_t i = 0; i < t.header.size(); ++i) out << (i ? "," : "") << t.header[i];
  if (!t.header.empty()) out << '\n';
  for (std::size_t r = 0; r < t.rows(); ++r) {
    for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << format_number(t.columns[c][r]);
    out << '\n';
  }
}

void write_table(const std::filesystem::path& path, const Table& t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write file: " + path.string());
  write_table(out, t);
}

spectra::Spectrum read_spectrum(const std::filesystem::path& path, spectra::SpectrumKind kind, double resolution_cm) {
  const Table t = read_table(path);
  const std::string what = path.string();
  return spectra::Spectrum(column(t, 0, what), column(t, 1, what), kind, resolution_cm);
}

Table spectrum_table(const spectra::Spectrum& s) {
  return {{"wavenumber_cm-1", "value"},
          {{s.wavenumber().begin(), s.wavenumber().end()}, {s.value().begin(), s.value().end()}}};
}

std::vector<relax::Point> read_points(const std::filesystem::path& path) {
  const Table t = read_table(path);
  const std::string what = path.string();
  const auto& tk = column(t, 0, what);
  const auto& t1 = column(t, 1, what);
  const auto& sg = column(t, 2, what);
  std::vector<relax::Point> pts(t.rows());
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = {tk[i], t1[i], sg[i]};
  return pts;
}

Table points_table(const std::vector<relax::Point>& pts) {
  Table t{{"temperature_K", "T1_s", "sigma_s"}, {{}, {}, {}}};
  for (const auto& p : pts) {
    t.columns[0].push_back(p.temperature_k);
    t.columns[1].push_back(p.t1_s);
    t.columns[2].push_back(p.sigma_s);
  }
  return t;
}

relax::PolarizationDecaySeries read_decay(const std::filesystem::path& path, double temperature_k) {
  const Table t = read_table(path);
  const std::string what = path.string();
  return {column(t, 0, what), column(t, 1, what), temperature_k};
}

Table decay_table(const relax::PolarizationDecaySeries& d) { return {{"delay_s", "signal"}, {d.delays_s, d.signal}}; }

mod::ModulationDataset read_modulation(const std::filesystem::path& path) {
  const Table t = read_table(path);
  const std::string what = path.string();
  mod::ModulationDataset d{column(t, 0, what), column(t, 1, what), column(t, 2, what), {}, {}};
  if (t.columns.size() >= 5) {
    d.reference_amplitude = t.columns[3];
    d.reference_phase_deg = t.columns[4];
  } else if (t.columns.size() == 4) {
    throw ValidationError(what + ": reference columns must come in amplitude/phase pairs");
  }
  return d;
}

Table modulation_table(const mod::ModulationDataset& d) {
  Table t{{"frequency_Hz", "amplitude", "phase_deg"}, {d.frequency_hz, d.amplitude, d.phase_deg}};
  if (d.has_reference()) {
    t.header.insert(t.header.end(), {"ref_amplitude", "ref_phase_deg"});
    t.columns.push_back(d.reference_amplitude);
    t.columns.push_back(d.reference_phase_deg);
  }
  return t;
}

}  // namespace sepi::io
