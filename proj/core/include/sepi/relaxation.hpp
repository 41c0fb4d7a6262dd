#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

#include "sepi/fitcore.hpp"
#include "sepi/units.hpp"

namespace sepi::relax {

/// 1/T1 = A T^n + B, with n = 9 for the two-phonon Raman process.
struct RelaxationModel {
  double raman_coefficient = 0.0;  // A, s^-1 K^-n
  double floor_rate = 0.0;         // B, s^-1
  double exponent = 9.0;
  Eigen::Matrix2d covariance = Eigen::Matrix2d::Zero();  // over (A, B)
  std::optional<Quantity> fitted_exponent;              // free-exponent diagnostic only

  double rate(double temperature_k) const;
  Quantity raman_coefficient_q() const;
  Quantity floor_rate_q() const;
  /// 1/B, the low-temperature limit.
  Quantity low_temperature_t1() const;
};

struct Point {
  double temperature_k;
  double t1_s;
  double sigma_s;
};

struct PolarizationDecaySeries {
  std::vector<double> delays_s;  // ascending, >= 0
  std::vector<double> signal;    // A minus B transient areas
  double temperature_k = 0.0;

  void validate() const;
};

struct DecayFit {
  Quantity t1;
  Quantity amplitude;
  fit::FitResult raw;  // over (amplitude / max|signal|, rate * max delay)
};

/// S(tau) = S0 exp(-tau / T1), no offset term.
DecayFit fit_decay(const PolarizationDecaySeries& series);
Quantity t1_from_decay(const PolarizationDecaySeries& series);

enum class TemperatureForm {
  raman_plus_floor,  // A T^9 + B
  raman_only,        // C T^9
  free_exponent,     // A T^n + B, n fitted (diagnostic)
};

/// Weighted fit in rate space; rate sigma = sigma_T1 / T1^2.
RelaxationModel fit_temperature_model(std::span<const Point> points,
                                      TemperatureForm form = TemperatureForm::raman_plus_floor);

/// 1/(A T^n + B) with first-order propagation of the (A, B) covariance.
Quantity predict_t1(const RelaxationModel& model, double temperature_k);

}  // namespace sepi::relax
