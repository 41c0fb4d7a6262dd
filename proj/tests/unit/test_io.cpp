#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sepi/errors.hpp"
#include "sepi/io.hpp"

using namespace sepi;
using namespace sepi::io;

namespace {

Table parse(const std::string& s) {
  std::istringstream in(s);
  return parse_table(in);
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("comma separated with header") {
  const Table t = parse("wavenumber_cm-1,value\n1,2\n3,4.5\n");
  REQUIRE(t.header.size() == 2);
  CHECK(t.header[0] == "wavenumber_cm-1");
  REQUIRE(t.columns.size() == 2);
  CHECK(t.rows() == 2);
  CHECK(t.columns[1][1] == 4.5);
}

TEST_CASE("whitespace separated, comments, no header") {
  const Table t = parse("# exported\n1.0\t2.0\n  3e2   -4  # trailing\n\n5 6\n");
  CHECK(t.header.empty());
  CHECK(t.rows() == 3);
  CHECK(t.columns[0][1] == 300.0);
  CHECK(t.columns[1][1] == -4.0);
}

TEST_CASE("malformed rows") {
  try {
    parse("a,b\n1,2\n3,x\n");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(e.index() == 1);
  }
  CHECK_THROWS_AS(parse("1,2\n3\n"), DataError);
  CHECK_THROWS_AS(parse("# nothing\n"), ValidationError);
  CHECK_THROWS_AS(parse("a,b\n"), ValidationError);
}

TEST_CASE("missing file names the path") {
  try {
    read_table("/nonexistent/dir/x.csv");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("/nonexistent/dir/x.csv") != std::string::npos);
  }
}

TEST_CASE("number formatting round trips") {
  for (double v : {0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 6.02214076e23, 7.7e-9, 2223.1}) {
    CHECK(std::stod(format_number(v)) == v);
  }
  CHECK(format_number(0.1) == "0.1");
}

TEST_CASE("table write and read back") {
  Table t;
  t.header = {"x", "y"};
  t.columns = {{1.0, 2.0, 3.0}, {0.1, 1.0 / 7.0, -1e-300}};
  std::ostringstream out;
  write_table(out, t);
  const Table b = parse(out.str());
  CHECK(b.header == t.header);
  CHECK(b.columns == t.columns);
}

TEST_CASE("typed readers") {
  const auto dir = std::filesystem::temp_directory_path() / "sepi-io-test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "s.txt");
    f << "3440 0.1\n3441 0.5\n3442 0.2\n";
  }
  const spectra::Spectrum s = read_spectrum(dir / "s.txt", spectra::SpectrumKind::luminescence, 1.0);
  CHECK(s.size() == 3);
  CHECK(s.value()[1] == 0.5);
  CHECK(spectrum_table(s).header[0] == "wavenumber_cm-1");

  {
    std::ofstream f(dir / "m.csv");
    f << "frequency_Hz,amplitude,phase_deg,ref_amplitude\n1e6,1,-1,1\n2e6,1,-2,1\n";
  }
  CHECK_THROWS(read_modulation(dir / "m.csv"));
  {
    std::ofstream f(dir / "m.csv");
    f << "frequency_Hz,amplitude,phase_deg,ref_amplitude,ref_phase_deg\n1e6,1,-1,0.5,-3\n2e6,1,-2,0.5,-4\n";
  }
  const mod::ModulationDataset m = read_modulation(dir / "m.csv");
  CHECK(m.has_reference());
  CHECK(m.reference_phase_deg[1] == -4.0);

  const std::vector<relax::Point> pts{{2.1, 16000.0, 160.0}, {4.2, 1146.0, 11.0}};
  write_table(dir / "p.csv", points_table(pts));
  const auto back = read_points(dir / "p.csv");
  REQUIRE(back.size() == 2);
  CHECK(back[1].t1_s == 1146.0);
  CHECK(back[1].sigma_s == 11.0);

  relax::PolarizationDecaySeries d{{0, 10, 20}, {1, 0.5, 0.25}, 0.0};
  write_table(dir / "d.csv", decay_table(d));
  const auto db = read_decay(dir / "d.csv", 4.2);
  CHECK(db.delays_s == d.delays_s);
  CHECK(db.temperature_k == 4.2);
  std::filesystem::remove_all(dir);
}

}
