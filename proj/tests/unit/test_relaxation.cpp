#include <doctest.h>

#include <cmath>
#include <random>

#include "sepi/errors.hpp"
#include "sepi/relaxation.hpp"

using namespace sepi;
using namespace sepi::relax;

namespace {

constexpr double kA = 2.0e-9;
constexpr double kB = 6.04e-5;

std::vector<Point> series(double a, double b, int n, double lo, double hi, double noise, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i) {
    const double t = lo + (hi - lo) * i / (n - 1);
    const double t1 = 1.0 / (a * std::pow(t, 9) + b);
    const double sig = noise > 0 ? noise : 0.01;
    pts.push_back({t, t1 * (1 + noise * g(rng)), sig * t1});
  }
  return pts;
}

}  // namespace

TEST_SUITE("relaxation") {

TEST_CASE("decay: exact recovery") {
  PolarizationDecaySeries s;
  for (int i = 0; i < 8; ++i) {
    s.delays_s.push_back(100.0 * i);
    s.signal.push_back(std::exp(-100.0 * i / 360.0));
  }
  const Quantity t1 = t1_from_decay(s);
  CHECK(t1.unit() == Unit::second);
  CHECK(std::abs(t1.value() - 360.0) / 360.0 < 1e-6);
}

TEST_CASE("decay: degenerate and invalid input") {
  PolarizationDecaySeries z{{0, 1, 2, 3}, {0, 0, 0, 0}, 4.2};
  CHECK_THROWS_AS(t1_from_decay(z), FitDegenerate);
  PolarizationDecaySeries grow{{0, 1, 2, 3}, {1, 2, 4, 8}, 4.2};
  CHECK_THROWS_AS(t1_from_decay(grow), FitDegenerate);
  PolarizationDecaySeries shortish{{0, 1, 2}, {1, 0.5, 0.25}, 4.2};
  CHECK_THROWS_AS(t1_from_decay(shortish), ValidationError);
  PolarizationDecaySeries unordered{{0, 2, 1, 3}, {1, 0.5, 0.25, 0.1}, 4.2};
  CHECK_THROWS_AS(t1_from_decay(unordered), DataError);
}

TEST_CASE("decay: 4.6 h with 2% noise") {
  const double t1 = 16560.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 0.02);
    PolarizationDecaySeries s;
    for (int i = 0; i < 16; ++i) {
      const double tau = 3.0 * t1 * i / 15.0;
      s.delays_s.push_back(tau);
      s.signal.push_back(std::exp(-tau / t1) + g(rng));
    }
    CHECK(std::abs(t1_from_decay(s).value() - t1) / t1 < 0.10);
  }
}

TEST_CASE("temperature model: noiseless recovery over 2.1-6.4 K") {
  const auto pts = series(kA, kB, 12, 2.1, 6.4, 0.0, 0);
  const RelaxationModel m = fit_temperature_model(pts);
  CHECK(std::abs(m.raman_coefficient - kA) / kA < 1e-6);
  CHECK(std::abs(m.floor_rate - kB) / kB < 1e-6);
  CHECK(m.raman_coefficient_q().unit() == Unit::per_second_per_kelvin9);
  CHECK(m.covariance(0, 1) == doctest::Approx(m.covariance(1, 0)));
}

TEST_CASE("temperature model: B = 0 is consistent with zero") {
  const auto pts = series(kA, 0.0, 12, 2.1, 6.4, 0.05, 3);
  const RelaxationModel m = fit_temperature_model(pts);
  CHECK(m.floor_rate >= 0.0);
  CHECK(m.floor_rate <= 2.0 * std::sqrt(m.covariance(1, 1)) + 1e-30);
  const RelaxationModel c = fit_temperature_model(pts, TemperatureForm::raman_only);
  CHECK(c.floor_rate == 0.0);
  CHECK(std::abs(c.raman_coefficient - kA) / kA < 0.1);
}

TEST_CASE("temperature model: 10% noise Monte Carlo within 30%") {
  int ok = 0;
  const int trials = 200;
  for (int s = 0; s < trials; ++s) {
    const RelaxationModel m = fit_temperature_model(series(kA, kB, 12, 2.1, 6.4, 0.10, 500 + s));
    if (std::abs(m.raman_coefficient - kA) / kA < 0.3 && std::abs(m.floor_rate - kB) / kB < 0.3) ++ok;
  }
  CHECK(ok >= 0.95 * trials);
}

TEST_CASE("temperature model: preconditions") {
  auto pts = series(kA, kB, 2, 2.1, 6.4, 0.0, 0);
  CHECK_THROWS_AS(fit_temperature_model(pts), ValidationError);
  CHECK_THROWS_AS(fit_temperature_model(series(kA, kB, 5, 3.0, 4.0, 0.0, 0)), ValidationError);
  std::vector<Point> same(5, Point{4.2, 1000.0, 10.0});
  CHECK_THROWS_AS(fit_temperature_model(same), RankDeficient);
  pts = series(kA, kB, 6, 2.1, 6.4, 0.0, 0);
  pts[2].sigma_s = 0.0;
  CHECK_THROWS_AS(fit_temperature_model(pts), DataError);
}

TEST_CASE("free exponent diagnostic finds 9") {
  const RelaxationModel m = fit_temperature_model(series(kA, kB, 12, 2.1, 6.4, 0.0, 0), TemperatureForm::free_exponent);
  REQUIRE(m.fitted_exponent.has_value());
  CHECK(m.fitted_exponent->value() == doctest::Approx(9.0).epsilon(1e-6));
}

TEST_CASE("predict: published constants at 4.2 K") {
  RelaxationModel m;
  m.raman_coefficient = kA;
  m.floor_rate = kB;
  const Quantity t1 = predict_t1(m, 4.2);
  CHECK(t1.value() == doctest::Approx(1.0 / (kA * std::pow(4.2, 9) + kB)).epsilon(1e-14));
  // quoted as 1146 s, 19.1 min
  CHECK(std::abs(t1.value() - 1146.0) / 1146.0 < 2e-3);
  CHECK(t1.in(Unit::minute).value() == doctest::Approx(19.1).epsilon(0.005));
  CHECK(std::abs(t1.in(Unit::minute).value() - 19.0) <= 3.0);
}

TEST_CASE("predict: low-temperature limit and A = 0") {
  RelaxationModel m;
  m.raman_coefficient = kA;
  m.floor_rate = 1.0 / (4.6 * 3600.0);
  CHECK(predict_t1(m, 0.05).value() == doctest::Approx(16560.0).epsilon(1e-9));
  CHECK(m.low_temperature_t1().in(Unit::hour).value() == doctest::Approx(4.6).epsilon(1e-12));
  m.raman_coefficient = 0.0;
  for (double t : {0.5, 4.2, 20.0}) CHECK(predict_t1(m, t).value() == doctest::Approx(16560.0).epsilon(1e-12));
  CHECK_THROWS_AS(predict_t1(m, 0.0), ValidationError);
}

TEST_CASE("predict: uncertainty propagation matches finite differences") {
  RelaxationModel m;
  m.raman_coefficient = kA;
  m.floor_rate = kB;
  m.covariance(0, 0) = std::pow(0.3e-9, 2);
  m.covariance(1, 1) = std::pow(2e-5, 2);
  const double t = 4.2;
  auto f = [&](double a, double b) { return 1.0 / (a * std::pow(t, 9) + b); };
  const double da = (f(kA * (1 + 1e-6), kB) - f(kA * (1 - 1e-6), kB)) / (2e-6 * kA);
  const double db = (f(kA, kB * (1 + 1e-6)) - f(kA, kB * (1 - 1e-6))) / (2e-6 * kB);
  const double sig = std::sqrt(da * da * m.covariance(0, 0) + db * db * m.covariance(1, 1));
  CHECK(predict_t1(m, t).uncertainty() == doctest::Approx(sig).epsilon(1e-6));
}

TEST_CASE("predict: monotone non-increasing in T") {
  RelaxationModel m;
  m.raman_coefficient = kA;
  m.floor_rate = kB;
  double prev = 1e300;
  for (double t = 0.1; t < 20; t += 0.1) {
    const double v = predict_t1(m, t).value();
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("rate additivity") {
  RelaxationModel ab, a0, b0;
  ab.raman_coefficient = a0.raman_coefficient = kA;
  ab.floor_rate = b0.floor_rate = kB;
  for (double t : {1.0, 2.5, 4.2, 7.0}) CHECK(ab.rate(t) == doctest::Approx(a0.rate(t) + b0.rate(t)).epsilon(1e-15));
}

TEST_CASE("fit/predict round trip across the parameter box") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 40; ++k) {
    const double a = std::pow(10.0, -10.0 + 3.0 * u(rng));
    const double b = std::pow(10.0, -6.0 + 3.0 * u(rng));
    const RelaxationModel m = fit_temperature_model(series(a, b, 12, 2.1, 6.4, 0.0, 0));
    CHECK(std::abs(m.raman_coefficient - a) / a < 1e-4);
    CHECK(std::abs(m.floor_rate - b) / b < 1e-4);
  }
}

}
