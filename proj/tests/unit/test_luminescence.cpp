#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sepi/errors.hpp"
#include "sepi/luminescence.hpp"

using namespace sepi;
using namespace sepi::lum;
using spectra::BaselineMode;
using spectra::PeakRegion;
using spectra::Spectrum;
using spectra::SpectrumKind;

namespace {

Quantity area(double v) { return {v, Unit::dimensionless}; }

// ZPL at 3444 with area 1, broad sideband at 3150 with area 5.6.
Spectrum pl_spectrum(double baseline = 0.0) {
  std::vector<double> x, y;
  for (double v = 2600.0; v <= 3500.0 + 1e-9; v += 0.25) {
    x.push_back(v);
    y.push_back(baseline + oracle::gaussian(v, 3444.0, 2.0, 1.0) + oracle::gaussian(v, 3150.0, 120.0, 5.6));
  }
  return Spectrum(x, y, SpectrumKind::luminescence, 1.0);
}

}  // namespace

TEST_SUITE("luminescence") {

TEST_CASE("5.6x sideband gives the 15% lower bound") {
  const ZplAnalysis z = zpl_fraction_from_areas(area(1.0), area(5.6));
  CHECK(z.fraction_raw.value() == doctest::Approx(1.0 / 6.6).epsilon(1e-14));
  CHECK(std::abs(z.fraction_raw.value() - 0.15) < 0.005);
  CHECK(z.fraction_corrected.value() == z.fraction_raw.value());
  CHECK(z.reabsorption_factor == 1.0);
}

TEST_CASE("0.947 mean transmission restores 16%") {
  // solve 0.16 = (1/t) / (1/t + 5.6) for t
  const double t = 0.84 / (0.16 * 5.6);
  CHECK(t == doctest::Approx(0.9375).epsilon(1e-12));
  const ZplAnalysis z = zpl_fraction_from_areas(area(1.0), area(5.6), t);
  CHECK(z.fraction_corrected.value() == doctest::Approx(0.16).epsilon(1e-12));
  const ZplAnalysis q = zpl_fraction_from_areas(area(1.0), area(5.6), 0.947);
  CHECK(std::abs(q.fraction_corrected.value() - 0.16) < 0.01);
  CHECK(q.fraction_corrected.value() >= q.fraction_raw.value());
  CHECK_THROWS_AS(zpl_fraction_from_areas(area(1.0), area(5.6), 0.0), ValidationError);
  CHECK_THROWS_AS(zpl_fraction_from_areas(area(1.0), area(5.6), 1.2), ValidationError);
  CHECK_THROWS_AS(zpl_fraction_from_areas(area(-1.0), area(5.6)), ValidationError);
}

TEST_CASE("fractions from a synthetic spectrum") {
  const Spectrum pl = pl_spectrum(0.01);
  const PeakRegion zpl{3434.0, 3454.0, BaselineMode::constant};
  const PeakRegion sb{2700.0, 3420.0, BaselineMode::constant};
  const ZplAnalysis z = zpl_fraction(pl, zpl, sb);
  CHECK(std::abs(z.fraction_raw.value() - 1.0 / 6.6) < 0.005);
  CHECK(z.fraction_raw.value() + z.sideband_area.value() / (z.zpl_area.value() + z.sideband_area.value()) ==
        doctest::Approx(1.0).epsilon(1e-15));

  // alpha == 0 changes nothing
  std::vector<double> ax, ay;
  for (double v = 3400; v <= 3480; v += 0.5) ax.push_back(v), ay.push_back(0.0);
  const Spectrum zero(ax, ay, SpectrumKind::absorption_coefficient, 1.0);
  const ZplAnalysis z0 = zpl_fraction(pl, zpl, sb, Reabsorption{zero, 0.5});
  CHECK(z0.fraction_corrected.value() == doctest::Approx(z0.fraction_raw.value()).epsilon(1e-15));

  // flat alpha: transmission is exactly exp(-alpha l)
  for (double& v : ay) v = 0.109;
  const Spectrum flat(ax, ay, SpectrumKind::absorption_coefficient, 1.0);
  const ZplAnalysis zc = zpl_fraction(pl, zpl, sb, Reabsorption{flat, 0.5});
  CHECK(zc.mean_transmission == doctest::Approx(std::exp(-0.109 * 0.5)).epsilon(1e-12));
  CHECK(zc.fraction_corrected.value() > zc.fraction_raw.value());
  CHECK(std::abs(zc.fraction_corrected.value() - 0.16) < 0.005);
}

TEST_CASE("region checks") {
  const Spectrum pl = pl_spectrum();
  CHECK_THROWS_AS(zpl_fraction(pl, {3430, 3454}, {3000, 3440}), ValidationError);
  CHECK_THROWS_AS(zpl_fraction(pl.with_kind(SpectrumKind::intensity), {3434, 3454}, {2700, 3420}), ValidationError);
  const PeakRegion d = default_sideband(pl, {3434, 3454});
  CHECK(d.lo == doctest::Approx(2734.0));
  CHECK(d.hi == doctest::Approx(3434.0));
  const PeakRegion clipped = default_sideband(pl, {2900, 2920});
  CHECK(clipped.lo == doctest::Approx(2600.0));
}

TEST_CASE("drifting baseline warns") {
  std::vector<double> x, y;
  for (double v = 2600.0; v <= 3500.0 + 1e-9; v += 0.25) {
    x.push_back(v);
    y.push_back(0.002 * (v - 2600.0) + oracle::gaussian(v, 3444.0, 2.0, 1.0) + oracle::gaussian(v, 3150.0, 120.0, 5.6));
  }
  const Spectrum pl(x, y, SpectrumKind::luminescence, 1.0);
  CHECK_FALSE(zpl_fraction(pl, {3434, 3454}, {2700, 3420}, {}).warnings.empty());
  CHECK(zpl_fraction(pl_spectrum(), {3434, 3454}, {2700, 3420}, {}).warnings.empty());
}

TEST_CASE("total radiative lifetime") {
  const Quantity tau{5.6, Unit::microsecond};
  CHECK(total_radiative_lifetime(tau, area(0.16)).in(Unit::microsecond).value() == doctest::Approx(0.896).epsilon(1e-12));
  CHECK(std::abs(total_radiative_lifetime(tau, area(0.16)).in(Unit::microsecond).value() - 0.90) < 0.01);
  CHECK(total_radiative_lifetime(tau, area(1.0)).value() == doctest::Approx(5.6e-6));
  const double half = total_radiative_lifetime(tau, area(0.08)).value();
  CHECK(half == doctest::Approx(0.5 * total_radiative_lifetime(tau, area(0.16)).value()).epsilon(1e-15));
  for (double f : {0.05, 0.16, 0.7}) CHECK(total_radiative_lifetime(tau, area(f)).value() / f == doctest::Approx(5.6e-6).epsilon(1e-14));
  CHECK_THROWS_AS(total_radiative_lifetime(tau, area(0.0)), ValidationError);
  CHECK_THROWS_AS(total_radiative_lifetime(tau, area(1.5)), ValidationError);
}

TEST_CASE("radiative efficiency") {
  const EfficiencyResult e = radiative_efficiency({7.7, 0.4, Unit::nanosecond}, {0.90, 0.07, Unit::microsecond});
  const double eta = 7.7e-9 / 0.90e-6;
  CHECK(e.radiative_efficiency.value() == doctest::Approx(eta).epsilon(1e-14));
  CHECK(e.radiative_efficiency.in(Unit::percent).value() == doctest::Approx(0.86).epsilon(0.01));
  CHECK(e.radiative_efficiency.uncertainty() == doctest::Approx(eta * std::hypot(0.4 / 7.7, 0.07 / 0.90)).epsilon(1e-12));
  CHECK(radiative_efficiency({3.0, Unit::second}, {3.0, Unit::second}).radiative_efficiency.value() == 1.0);
  CHECK(radiative_efficiency({7.7, Unit::nanosecond}, {7.7, Unit::microsecond}).radiative_efficiency.value() ==
        doctest::Approx(1e-3).epsilon(1e-14));
  CHECK_THROWS_AS(radiative_efficiency({2.0, Unit::microsecond}, {1.0, Unit::microsecond}), UnphysicalEfficiency);
  CHECK_THROWS_AS(radiative_efficiency({0.0, Unit::second}, {1.0, Unit::second}), ValidationError);
}

}
