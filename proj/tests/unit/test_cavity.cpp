#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sepi/cavity.hpp"
#include "sepi/errors.hpp"

using namespace sepi;
using namespace sepi::cavity;

namespace {

double oracle_c(double mu_d, double lw_cm, double q, double v, double lam, double n) {
  const double w = 2 * oracle::pi * oracle::c / lam;
  const double vol = v * std::pow(lam / n, 3);
  const double g = mu_d * oracle::debye * std::sqrt(w / (2 * oracle::hbar * oracle::eps0 * n * n * vol));
  const double kappa = w / q;
  const double gamma = 2 * oracle::pi * oracle::c * 100 * lw_cm;
  return 4 * g * g / (kappa * gamma);
}

}  // namespace

TEST_SUITE("cavity") {

TEST_CASE("cooperativity near one for the measured dipole") {
  const CooperativityResult r = cooperativity(1.96, 0.001, CavitySpec{});
  CHECK(r.cooperativity.value() == doctest::Approx(oracle_c(1.96, 0.001, 1.5e4, 1, 2.9e-6, 3.44)).epsilon(1e-12));
  CHECK(r.cooperativity.value() > 1.0 / 1.5);
  CHECK(r.cooperativity.value() < 1.5);
  CHECK(r.kappa.value() == doctest::Approx(2 * oracle::pi * oracle::c / 2.9e-6 / 1.5e4).epsilon(1e-14));
  CHECK(r.gamma.value() == doctest::Approx(2 * oracle::pi * oracle::c * 0.1).epsilon(1e-14));
  const double q = threshold_q(1.96, 0.001, CavitySpec{}, 1.0).value();
  CHECK(q > 1.5e4 / 1.5);
  CHECK(q < 1.5e4 * 1.5);
}

TEST_CASE("exact scalings") {
  const CavitySpec base{};
  const double c0 = cooperativity(1.96, 0.001, base).cooperativity.value();
  CavitySpec q2 = base;
  q2.quality_factor *= 2;
  CHECK(cooperativity(1.96, 0.001, q2).cooperativity.value() == doctest::Approx(2 * c0).epsilon(1e-14));
  CavitySpec v2 = base;
  v2.mode_volume *= 2;
  CHECK(cooperativity(1.96, 0.001, v2).cooperativity.value() == doctest::Approx(c0 / 2).epsilon(1e-14));
  CHECK(cooperativity(3.92, 0.001, base).cooperativity.value() == doctest::Approx(4 * c0).epsilon(1e-14));
  CHECK(cooperativity(1.96, 0.0005, base).cooperativity.value() == doctest::Approx(2 * c0).epsilon(1e-14));

  const double q1 = threshold_q(1.96, 0.001, base, 1.0).value();
  CHECK(threshold_q(1.96, 0.001, base, 2.0).value() == doctest::Approx(2 * q1).epsilon(1e-14));
  CHECK(threshold_q(1.96, 0.0005, base, 1.0).value() == doctest::Approx(q1 / 2).epsilon(1e-14));
}

TEST_CASE("threshold round trip") {
  for (double target : {0.01, 1.0, 7.5, 300.0})
    for (double mu : {0.4, 1.96, 5.0}) {
      CavitySpec c{};
      c.quality_factor = threshold_q(mu, 0.00069, CavitySpec{}, target).value();
      CHECK(std::abs(cooperativity(mu, 0.00069, c).cooperativity.value() - target) <= 1e-10 * target);
    }
}

TEST_CASE("simultaneous Q and V scaling leaves C unchanged") {
  const double c0 = cooperativity(1.96, 0.001, CavitySpec{}).cooperativity.value();
  for (double a : {0.1, 3.0, 17.0}) {
    CavitySpec c{};
    c.quality_factor *= a;
    c.mode_volume *= a;
    CHECK(cooperativity(1.96, 0.001, c).cooperativity.value() == doctest::Approx(c0).epsilon(1e-13));
  }
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(cooperativity(0.0, 0.001, CavitySpec{}), ValidationError);
  CHECK_THROWS_AS(cooperativity(1.96, -1.0, CavitySpec{}), ValidationError);
  CHECK_THROWS_AS(threshold_q(1.96, 0.001, CavitySpec{}, 0.0), ValidationError);
  CavitySpec bad{};
  bad.refractive_index = 0.5;
  CHECK_THROWS_AS(cooperativity(1.96, 0.001, bad), ValidationError);
  bad = CavitySpec{};
  bad.mode_volume = 0.0;
  CHECK_THROWS_AS(cooperativity(1.96, 0.001, bad), ValidationError);
}

}
