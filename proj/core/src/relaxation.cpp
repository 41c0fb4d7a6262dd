#include "sepi/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sepi/errors.hpp"

namespace sepi::relax {

double RelaxationModel::rate(double temperature_k) const {
  return raman_coefficient * std::pow(temperature_k, exponent) + floor_rate;
}

Quantity RelaxationModel::raman_coefficient_q() const {
  return {raman_coefficient, std::sqrt(std::max(0.0, covariance(0, 0))), Unit::per_second_per_kelvin9};
}

Quantity RelaxationModel::floor_rate_q() const {
  return {floor_rate, std::sqrt(std::max(0.0, covariance(1, 1))), Unit::per_second};
}

Quantity RelaxationModel::low_temperature_t1() const {
  if (!(floor_rate > 0.0)) throw ValidationError("zero floor rate gives an unbounded low-temperature T1");
  const double t1 = 1.0 / floor_rate;
  return {t1, t1 * std::sqrt(std::max(0.0, covariance(1, 1))) / floor_rate, Unit::second};
}

void PolarizationDecaySeries::validate() const {
  if (delays_s.size() != signal.size()) throw ValidationError("delay and signal lengths differ");
  if (delays_s.size() < 4) throw ValidationError("decay series needs at least 4 points");
  for (std::size_t i = 0; i < delays_s.size(); ++i) {
    if (!(delays_s[i] >= 0.0)) throw DataError("negative delay", i);
    if (i > 0 && !(delays_s[i] > delays_s[i - 1])) throw DataError("delays must be strictly ascending", i);
    if (!std::isfinite(signal[i])) throw DataError("non-finite signal", i);
  }
}

DecayFit fit_decay(const PolarizationDecaySeries& series) {
  series.validate();
  const auto& t = series.delays_s;
  const auto& s = series.signal;
  const std::size_t n = t.size();

  double smax = 0.0;
  for (double v : s) smax = std::max(smax, std::abs(v));
  if (smax == 0.0) throw FitDegenerate("decay signal is identically zero");
  const double tscale = std::max(t.back(), 1e-300);

  // Log-linear start on points sharing the sign of the first sample.
  const double sign = s.front() != 0.0 ? std::copysign(1.0, s.front()) : 1.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (sign * s[i] <= 0.0) continue;
    const double x = t[i] / tscale;
    const double y = std::log(sign * s[i] / smax);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
    ++m;
  }
  double k0 = 1.0, a0 = sign;
  if (m >= 2 && m * sxx - sx * sx > 0.0) {
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double icpt = (sy - slope * sx) / m;
    if (slope < 0.0) {
      k0 = -slope;
      a0 = sign * std::exp(icpt);
    }
  }

  fit::FitProblem prob;
  prob.initial = fit::Vector{{a0, k0}};
  prob.residual = [&](const fit::Vector& p) {
    fit::Vector r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = p[0] * std::exp(-p[1] * t[i] / tscale) - s[i] / smax;
    return r;
  };
  fit::FitResult res;
  try {
    res = fit::solve(prob);
  } catch (const RankDeficient&) {
    // a growing or flat series drives the rate through zero and the fit collapses
    throw FitDegenerate("decay fit collapsed; the signal does not decay");
  } catch (const NonFiniteResidual&) {
    throw FitDegenerate("decay fit diverged; the signal does not decay");
  }
  const double k = res.params[1];
  if (!(k > 0.0)) throw FitDegenerate("fitted decay time is not positive");
  const double t1 = tscale / k;
  DecayFit out{
      .t1 = {t1, t1 * res.sigma(1) / k, Unit::second},
      .amplitude = {res.params[0] * smax, res.sigma(0) * smax, Unit::dimensionless},
      .raw = res,
  };
  return out;
}

Quantity t1_from_decay(const PolarizationDecaySeries& series) { return fit_decay(series).t1; }

RelaxationModel fit_temperature_model(std::span<const Point> points, TemperatureForm form) {
  if (points.size() < 3) throw ValidationError("temperature fit needs at least 3 points");
  double tmin = std::numeric_limits<double>::infinity(), tmax = 0.0;
  double ymin = std::numeric_limits<double>::infinity(), ymax = 0.0;
  const std::size_t n = points.size();
  fit::Vector x(n), y(n), w(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = points[i];
    if (!(p.temperature_k > 0.0)) throw DataError("temperature must be positive", i);
    if (!(p.t1_s > 0.0)) throw DataError("T1 must be positive", i);
    if (!(p.sigma_s > 0.0)) throw DataError("T1 uncertainty must be positive", i);
    tmin = std::min(tmin, p.temperature_k);
    tmax = std::max(tmax, p.temperature_k);
    y[i] = 1.0 / p.t1_s;
    const double sigma_rate = p.sigma_s / (p.t1_s * p.t1_s);
    w[i] = 1.0 / (sigma_rate * sigma_rate);
    ymin = std::min(ymin, y[i]);
    ymax = std::max(ymax, y[i]);
  }
  for (std::size_t i = 0; i < n; ++i) x[i] = points[i].temperature_k / tmax;
  // Identical temperatures fall through to the solver's rank check.
  if (tmax > tmin && tmax / tmin < 1.5)
    throw ValidationError("temperatures must span a ratio of at least 1.5");

  // Parameters are scaled so both are O(1): A = a ymax / Tmax^n, B = b ymin.
  const bool with_floor = form != TemperatureForm::raman_only;
  const bool free_n = form == TemperatureForm::free_exponent;
  const double inf = std::numeric_limits<double>::infinity();

  fit::FitProblem prob;
  prob.weights = w;
  if (form == TemperatureForm::raman_only) {
    prob.initial = fit::Vector{{1.0}};
    prob.bounds = fit::Bounds{fit::Vector{{0.0}}, fit::Vector{{inf}}};
  } else if (free_n) {
    prob.initial = fit::Vector{{1.0, 1.0, 9.0}};
    prob.bounds = fit::Bounds{fit::Vector{{0.0, 0.0, 0.0}}, fit::Vector{{inf, inf, 30.0}}};
  } else {
    prob.initial = fit::Vector{{1.0, 1.0}};
    prob.bounds = fit::Bounds{fit::Vector{{0.0, 0.0}}, fit::Vector{{inf, inf}}};
  }
  prob.residual = [&](const fit::Vector& p) {
    const double expo = free_n ? p[2] : 9.0;
    const double floor = with_floor ? p[1] * ymin : 0.0;
    fit::Vector r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = p[0] * ymax * std::pow(x[i], expo) + floor - y[i];
    return r;
  };
  const fit::FitResult res = fit::solve(prob);

  RelaxationModel model;
  const double expo = free_n ? res.params[2] : 9.0;
  const double a_scale = ymax / std::pow(tmax, expo);
  model.exponent = expo;
  model.raman_coefficient = res.params[0] * a_scale;
  model.covariance(0, 0) = res.covariance(0, 0) * a_scale * a_scale;
  if (with_floor) {
    model.floor_rate = res.params[1] * ymin;
    model.covariance(1, 1) = res.covariance(1, 1) * ymin * ymin;
    model.covariance(0, 1) = model.covariance(1, 0) = res.covariance(0, 1) * a_scale * ymin;
  }
  if (free_n) model.fitted_exponent = Quantity{expo, res.sigma(2), Unit::dimensionless};
  return model;
}

Quantity predict_t1(const RelaxationModel& model, double temperature_k) {
  if (!(temperature_k > 0.0)) throw ValidationError("temperature must be positive");
  const double tn = std::pow(temperature_k, model.exponent);
  const double rate = model.rate(temperature_k);
  if (!(rate > 0.0)) throw ValidationError("relaxation rate is zero; T1 is unbounded");
  const double t1 = 1.0 / rate;
  const Eigen::Vector2d grad{-tn * t1 * t1, -t1 * t1};
  const double var = grad.dot(model.covariance * grad);
  return {t1, std::sqrt(std::max(0.0, var)), Unit::second};
}

}  // namespace sepi::relax
