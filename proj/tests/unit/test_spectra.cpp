#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sepi/errors.hpp"
#include "sepi/spectra.hpp"

using namespace sepi;
using namespace sepi::spectra;

namespace {

std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> x;
  const int n = static_cast<int>(std::llround((hi - lo) / step));
  for (int i = 0; i <= n; ++i) x.push_back(lo + step * i);
  return x;
}

Spectrum make(const std::vector<double>& x, const std::function<double(double)>& f,
              SpectrumKind kind = SpectrumKind::absorption_coefficient, double res = 0.0) {
  std::vector<double> y;
  for (double xi : x) y.push_back(f(xi));
  return Spectrum(x, y, kind, res > 0 ? res : 2.0 * (x[1] - x[0]));
}

}  // namespace

TEST_SUITE("spectra") {

TEST_CASE("construction invariants") {
  CHECK_THROWS_AS(Spectrum({1.0}, {1.0}, SpectrumKind::intensity, 1.0), ValidationError);
  CHECK_THROWS_AS(Spectrum({1.0, 2.0}, {1.0}, SpectrumKind::intensity, 1.0), ValidationError);
  CHECK_THROWS_AS(Spectrum({1.0, 2.0}, {1.0, 1.0}, SpectrumKind::intensity, 0.0), ValidationError);
  CHECK_THROWS_AS(Spectrum({1.0, 2.0}, {1.0, 1.0}, SpectrumKind::intensity, 10.5), ValidationError);
  try {
    Spectrum({1.0, 3.0, 2.0}, {1, 1, 1}, SpectrumKind::intensity, 1.0);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(e.index() == 2);
  }
  const Spectrum s({1.0, 2.0, 4.0}, {0.0, 1.0, 3.0}, SpectrumKind::intensity, 1.0);
  CHECK(s.value_at(3.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(s.value_at(4.5), BoundsError);
}

TEST_CASE("identity transmission gives zero alpha") {
  const auto x = grid(3400, 3500, 0.5);
  const Spectrum i0 = make(x, [](double v) { return 1.0 + 1e-3 * (v - 3400); }, SpectrumKind::intensity);
  const AbsorptionSpectrum a = absorption_coefficient(i0, i0, 0.3);
  for (double v : a.alpha.value()) CHECK(v == 0.0);
  CHECK(a.alpha.kind() == SpectrumKind::absorption_coefficient);
}

TEST_CASE("e^-1 transmission at one point") {
  const std::vector<double> x{1.0, 2.0, 3.0};
  const Spectrum ref(x, {2.0, 2.0, 2.0}, SpectrumKind::intensity, 1.0);
  const Spectrum sam(x, {2.0, 2.0 / std::exp(1.0), 2.0}, SpectrumKind::intensity, 1.0);
  const AbsorptionSpectrum a = absorption_coefficient(sam, ref, 1.0);
  CHECK(a.alpha.value()[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(a.alpha.value()[0] == 0.0);
}

TEST_CASE("Beer-Lambert round trip") {
  const auto x = grid(3420, 3470, 0.05);
  auto lorentz = [](double v) { return 0.9 / (1.0 + std::pow((v - 3444.0) / 0.4, 2)); };
  const Spectrum alpha = make(x, lorentz);
  const Spectrum ref = make(x, [](double v) { return 2.0 - 0.001 * (v - 3420); }, SpectrumKind::intensity);
  std::vector<double> is;
  for (std::size_t i = 0; i < x.size(); ++i) is.push_back(ref.value()[i] * std::exp(-lorentz(x[i]) * 0.2));
  const Spectrum sam(x, is, SpectrumKind::intensity, 0.2);
  const AbsorptionSpectrum back = absorption_coefficient(sam, ref, 0.2);
  REQUIRE(back.alpha.size() == x.size());
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(back.alpha.value()[i] - lorentz(x[i])) <= 1e-8);

  // library forward model agrees with the hand-built one
  const Spectrum fwd = beer_lambert_transmission(alpha, ref, 0.2);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(fwd.value()[i] == doctest::Approx(is[i]).epsilon(1e-14));
}

TEST_CASE("absorption errors") {
  const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
  const Spectrum ref(x, {1.0, 1.0, 0.0, 1.0}, SpectrumKind::intensity, 1.0);
  const Spectrum sam(x, {0.5, 0.5, 0.5, 0.5}, SpectrumKind::intensity, 1.0);
  try {
    absorption_coefficient(sam, ref, 1.0);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(e.index() == 2);
  }
  const Spectrum good(x, {1.0, 1.0, 1.0, 1.0}, SpectrumKind::intensity, 1.0);
  const Spectrum sat(x, {0.5, -0.1, 0.5, 0.5}, SpectrumKind::intensity, 1.0);
  const AbsorptionSpectrum a = absorption_coefficient(sat, good, 1.0);
  REQUIRE(a.excluded.size() == 1);
  CHECK(a.excluded[0] == 1);
  CHECK(a.alpha.size() == 3);
  CHECK_FALSE(a.warnings.empty());
  CHECK_THROWS_AS(absorption_coefficient(sam, good, 0.0), ValidationError);
  CHECK_THROWS_AS(absorption_coefficient(sam.with_kind(SpectrumKind::luminescence), good, 1.0), ValidationError);
}

TEST_CASE("mismatched grids are resampled") {
  const auto xs = grid(3420, 3470, 0.1);
  const auto xr = grid(3419, 3471, 0.13);
  const Spectrum ref = make(xr, [](double v) { return 1.0 + 0.01 * (v - 3419); }, SpectrumKind::intensity);
  std::vector<double> is;
  for (double v : xs) is.push_back((1.0 + 0.01 * (v - 3419)) * std::exp(-0.2));
  const AbsorptionSpectrum a = absorption_coefficient(Spectrum(xs, is, SpectrumKind::intensity, 0.5), ref, 1.0);
  for (double v : a.alpha.value()) CHECK(v == doctest::Approx(0.2).epsilon(1e-9));
  const Spectrum narrow = make(grid(3460, 3470, 0.1), [](double) { return 1.0; }, SpectrumKind::intensity);
  CHECK_THROWS_AS(absorption_coefficient(Spectrum(xs, is, SpectrumKind::intensity, 0.5), narrow, 1.0), ValidationError);
}

TEST_CASE("unit-area Gaussian integrates to one") {
  const double sig = 0.5;
  const double fwhm = sig * 2.0 * std::sqrt(2.0 * std::log(2.0));
  const auto x = grid(3430, 3460, 0.01);
  const Spectrum s = make(x, [&](double v) { return oracle::gaussian(v, 3444.0, fwhm, 1.0); });
  const Quantity area = integrate_line(s, {3444.0 - 5 * sig, 3444.0 + 5 * sig, BaselineMode::constant});
  CHECK(std::abs(area.value() - 1.0) < 1e-4);
  // against Simpson on the analytic profile
  const double ref = oracle::simpson([&](double v) { return oracle::gaussian(v, 3444.0, fwhm, 1.0); }, 3441.5, 3446.5, 2000);
  CHECK(std::abs(area.value() - ref) < 1e-4);
}

TEST_CASE("flat spectrum integrates to zero after baseline") {
  const auto x = grid(0, 100, 0.5);
  const Spectrum s = make(x, [](double) { return 7.3; });
  CHECK(std::abs(integrate_line(s, {40, 60, BaselineMode::constant}).value()) < 1e-12);
  CHECK(std::abs(integrate_line(s, {40, 60, BaselineMode::linear}).value()) < 1e-12);
  CHECK(integrate_line(s, {40, 60, BaselineMode::none}).value() == doctest::Approx(7.3 * 20));
}

TEST_CASE("Gaussian on a sloped baseline") {
  const double fwhm = 1.2;
  const auto x = grid(3420, 3470, 0.02);
  const Spectrum s = make(x, [&](double v) { return 0.3 + 0.02 * (v - 3420) + oracle::gaussian(v, 3444.0, fwhm, 1.0); });
  const Quantity area = integrate_line(s, {3440, 3448, BaselineMode::linear});
  CHECK(std::abs(area.value() - 1.0) < 1e-3);
  const Baseline b = estimate_baseline(s, {3440, 3448, BaselineMode::linear});
  CHECK(b.slope == doctest::Approx(0.02).epsilon(1e-6));
}

TEST_CASE("region bounds") {
  const Spectrum s = make(grid(0, 10, 0.5), [](double) { return 1.0; });
  CHECK_THROWS_AS(integrate_line(s, {-1, 5}), BoundsError);
  CHECK_THROWS_AS(integrate_line(s, {5, 11}), BoundsError);
  CHECK_THROWS_AS(integrate_line(s, {5, 5}), ValidationError);
}

TEST_CASE("integration is additive over adjacent regions with a shared baseline") {
  const auto x = grid(3400, 3500, 0.1);
  const Spectrum s = make(x, [](double v) { return 0.1 + 0.001 * v + oracle::gaussian(v, 3450, 6, 2.0); });
  const PeakRegion whole{3430, 3470, BaselineMode::linear};
  const Baseline b = estimate_baseline(s, whole);
  for (double cut : {3431.3, 3450.0, 3462.07}) {
    const double l = integrate_line(s, {3430, cut, BaselineMode::linear}, b).value();
    const double r = integrate_line(s, {cut, 3470, BaselineMode::linear}, b).value();
    CHECK(l + r == doctest::Approx(integrate_line(s, whole, b).value()).epsilon(1e-12));
  }
}

TEST_CASE("single peak center") {
  const double c = 9246.49 - 2223.1;
  const Spectrum s = make(grid(7000, 7050, 0.25), [&](double v) { return oracle::gaussian(v, c, 1.5, 1.0); },
                          SpectrumKind::luminescence, 1.0);
  const auto peaks = find_peaks(s, 0.05);
  REQUIRE(peaks.size() == 1);
  CHECK(std::abs(peaks[0].center - c) <= s.resolution() / 4);
  CHECK(peaks[0].fwhm == doctest::Approx(1.5).epsilon(0.05));
}

TEST_CASE("monotonic spectrum has no peaks") {
  const Spectrum s = make(grid(0, 10, 0.1), [](double v) { return std::exp(0.2 * v); });
  CHECK(find_peaks(s, 1e-6).empty());
  CHECK_THROWS_AS(find_peaks(s, 0.0), ValidationError);
}

TEST_CASE("resolves the 27.6 cm-1 pair") {
  const double c1 = 9246.49 - 2223.1, c2 = 9246.49 - 2195.5;
  const Spectrum s = make(grid(7000, 7080, 0.1),
                          [&](double v) { return oracle::gaussian(v, c1, 0.5, 1.0) + oracle::gaussian(v, c2, 0.5, 0.7); },
                          SpectrumKind::luminescence, 0.5);
  const auto peaks = find_peaks(s, 0.05);
  REQUIRE(peaks.size() == 2);
  CHECK(std::abs(peaks[0].center - c1) < 0.25);
  CHECK(std::abs(peaks[1].center - c2) < 0.25);
}

TEST_CASE("peak centers are invariant to positive scaling") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 0.002);
  const auto x = grid(7000, 7080, 0.1);
  std::vector<double> y;
  for (double v : x) y.push_back(oracle::gaussian(v, 7023.4, 0.8, 1.0) + oracle::gaussian(v, 7051.0, 2.0, 3.0) + n(rng));
  const Spectrum s(x, y, SpectrumKind::luminescence, 0.5);
  const auto base = find_peaks(s, 0.1);
  REQUIRE(base.size() == 2);
  for (double k : {1e-6, 0.37, 12.0, 4.5e8}) {
    const auto p = find_peaks(s.scaled(k), 0.1 * k);
    REQUIRE(p.size() == base.size());
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(p[i].center == doctest::Approx(base[i].center).epsilon(1e-12));
  }
}

}
