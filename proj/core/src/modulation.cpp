#include "sepi/modulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sepi/errors.hpp"

namespace sepi::mod {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kDeg = 180.0 / std::numbers::pi;

double interp(const std::vector<double>& x, const std::vector<double>& y, double at) {
  if (at < x.front() || at > x.back()) throw BoundsError("frequency outside dataset range during averaging");
  auto it = std::lower_bound(x.begin(), x.end(), at);
  const std::size_t j = static_cast<std::size_t>(it - x.begin());
  if (x[j] == at) return y[j];
  const double t = (at - x[j - 1]) / (x[j] - x[j - 1]);
  return y[j - 1] + t * (y[j] - y[j - 1]);
}

}  // namespace

Response response_model(double frequency_hz, double t1_s) {
  if (!(frequency_hz > 0.0) || !(t1_s > 0.0)) throw ValidationError("frequency and T1 must be positive");
  const double x = kTwoPi * frequency_hz * t1_s;
  return {1.0 / std::sqrt(1.0 + x * x), -std::atan(x) * kDeg};
}

void ModulationDataset::validate() const {
  const std::size_t n = frequency_hz.size();
  if (amplitude.size() != n || phase_deg.size() != n) throw ValidationError("modulation columns differ in length");
  if (has_reference() && (reference_amplitude.size() != n || reference_phase_deg.size() != n))
    throw ValidationError("reference columns differ in length");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(frequency_hz[i] > 0.0)) throw DataError("modulation frequency must be positive", i);
    if (i > 0 && !(frequency_hz[i] > frequency_hz[i - 1])) throw DataError("frequencies must be strictly ascending", i);
    if (!(amplitude[i] > 0.0)) throw DataError("amplitude must be positive", i);
    if (!std::isfinite(phase_deg[i])) throw DataError("non-finite phase", i);
  }
}

ModulationDataset correct_instrument(const ModulationDataset& d) {
  d.validate();
  if (!d.has_reference()) throw ValidationError("instrument correction needs a reference response");
  ModulationDataset out;
  out.frequency_hz = d.frequency_hz;
  out.amplitude.resize(d.size());
  out.phase_deg.resize(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!(d.reference_amplitude[i] > 0.0)) throw DataError("reference amplitude is not positive", i);
    out.amplitude[i] = d.amplitude[i] / d.reference_amplitude[i];
    out.phase_deg[i] = d.phase_deg[i] - d.reference_phase_deg[i];
  }
  return out;
}

ModulationDataset average_datasets(std::span<const ModulationDataset> sets) {
  if (sets.empty()) throw ValidationError("nothing to average");
  for (const auto& s : sets) s.validate();
  const ModulationDataset& first = sets.front();
  ModulationDataset out;
  out.frequency_hz = first.frequency_hz;
  out.amplitude.assign(first.size(), 0.0);
  out.phase_deg.assign(first.size(), 0.0);
  const bool refs = std::all_of(sets.begin(), sets.end(), [](const auto& s) { return s.has_reference(); });
  if (refs) {
    out.reference_amplitude.assign(first.size(), 0.0);
    out.reference_phase_deg.assign(first.size(), 0.0);
  }
  for (const auto& s : sets) {
    for (std::size_t i = 0; i < first.size(); ++i) {
      const double f = first.frequency_hz[i];
      out.amplitude[i] += interp(s.frequency_hz, s.amplitude, f);
      out.phase_deg[i] += interp(s.frequency_hz, s.phase_deg, f);
      if (refs) {
        out.reference_amplitude[i] += interp(s.frequency_hz, s.reference_amplitude, f);
        out.reference_phase_deg[i] += interp(s.frequency_hz, s.reference_phase_deg, f);
      }
    }
  }
  const double n = static_cast<double>(sets.size());
  for (auto* col : {&out.amplitude, &out.phase_deg, &out.reference_amplitude, &out.reference_phase_deg})
    for (double& v : *col) v /= n;
  return out;
}

Quantity critical_frequency(const Quantity& t1) {
  const Quantity t = t1.in(Unit::second);
  const double f = 1.0 / (kTwoPi * t.value());
  return {f, f * t.relative_uncertainty(), Unit::hertz};
}

Quantity homogeneous_linewidth(const Quantity& t1) {
  const Quantity t = t1.in(Unit::second);
  const double lw = 1.0 / (kTwoPi * t.value() * constants::c_cm);
  return {lw, lw * t.relative_uncertainty(), Unit::wavenumber};
}

LifetimeResult fit_lifetime(const ModulationDataset& d, FitMode mode, bool fit_phase_offset) {
  d.validate();
  const std::size_t n = d.size();
  if (n < 5) throw ValidationError("lifetime fit needs at least 5 frequencies");
  const double fmin = d.frequency_hz.front(), fmax = d.frequency_hz.back();
  if (fmax / fmin < 4.0) throw ValidationError("frequencies must span at least a factor of 4");
  if (!fit_phase_offset && mode != FitMode::amplitude) {
    for (std::size_t i = 0; i < n; ++i)
      if (!(d.phase_deg[i] > -90.0 && d.phase_deg[i] <= 0.0))
        throw DataError("phase outside (-90, 0] deg; single-pole data cannot be unwrapped", i);
  }

  // T1 is fitted in units of 1/(2 pi f_geo) so the parameter is O(1).
  const double t_unit = 1.0 / (kTwoPi * std::sqrt(fmin * fmax));
  const double amax = *std::max_element(d.amplitude.begin(), d.amplitude.end());

  // Start: median of per-point phase estimates, else the amplitude half-power point.
  double t0 = 1.0;
  {
    std::vector<double> est;
    for (std::size_t i = 0; i < n; ++i) {
      const double lag = -d.phase_deg[i] / kDeg;
      if (lag > 0.05 && lag < 1.5) est.push_back(std::tan(lag) / (kTwoPi * d.frequency_hz[i]) / t_unit);
    }
    if (!est.empty()) {
      std::nth_element(est.begin(), est.begin() + static_cast<std::ptrdiff_t>(est.size() / 2), est.end());
      t0 = est[est.size() / 2];
    } else {
      for (std::size_t i = 0; i < n; ++i)
        if (d.amplitude[i] < amax / std::sqrt(2.0)) {
          t0 = 1.0 / (kTwoPi * d.frequency_hz[i]) / t_unit;
          break;
        }
    }
  }

  const bool use_amp = mode != FitMode::phase;
  const bool use_phase = mode != FitMode::amplitude;
  // Parameter layout: [scale]? t1 [offset]?
  const Eigen::Index i_scale = use_amp ? 0 : -1;
  const Eigen::Index i_t1 = use_amp ? 1 : 0;
  const Eigen::Index i_off = fit_phase_offset && use_phase ? i_t1 + 1 : -1;
  const Eigen::Index k = i_t1 + 1 + (i_off >= 0 ? 1 : 0);

  fit::FitProblem prob;
  prob.initial = fit::Vector::Zero(k);
  prob.initial[i_t1] = t0;
  if (use_amp) {
    const double a0 = 1.0 / std::sqrt(1.0 + std::pow(kTwoPi * fmin * t0 * t_unit, 2));
    prob.initial[i_scale] = d.amplitude.front() / a0 / amax;
  }
  const std::size_t m = (use_amp ? n : 0) + (use_phase ? n : 0);
  prob.residual = [&, i_scale, i_t1, i_off](const fit::Vector& p) {
    fit::Vector r(m);
    std::size_t row = 0;
    const double t1 = p[i_t1] * t_unit;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = kTwoPi * d.frequency_hz[i] * t1;
      if (use_amp) r[row++] = p[i_scale] / std::sqrt(1.0 + x * x) - d.amplitude[i] / amax;
      if (use_phase) {
        const double off = i_off >= 0 ? p[i_off] : 0.0;
        r[row++] = (-std::atan(x) * kDeg + off - d.phase_deg[i]) / 90.0;
      }
    }
    return r;
  };
  const fit::FitResult res = fit::solve(prob);

  // amplitude alone only sees T1^2, so its sign is arbitrary there
  const double t1v = (use_phase ? res.params[i_t1] : std::abs(res.params[i_t1])) * t_unit;
  if (!(t1v > 0.0)) throw FitDegenerate("fitted excited-state lifetime is not positive");
  const Quantity t1{t1v, res.sigma(i_t1) * t_unit, Unit::second};

  LifetimeResult out{
      .t1 = t1,
      .critical_frequency = critical_frequency(t1),
      .homogeneous_linewidth = homogeneous_linewidth(t1),
      .amplitude_scale = use_amp ? res.params[i_scale] * amax : 1.0,
      .phase_offset = {},
      .warnings = {},
      .raw = res,
  };
  if (i_off >= 0) out.phase_offset = Quantity{res.params[i_off], res.sigma(i_off), Unit::degree};
  const double x_lo = kTwoPi * fmin * t1v, x_hi = kTwoPi * fmax * t1v;
  if (x_hi < 0.2 || x_lo > 5.0)
    out.warnings.push_back("response knee lies outside the measured band; T1 is extrapolated");
  if (!res.converged) out.warnings.push_back("lifetime fit did not converge within the iteration limit");
  return out;
}

}  // namespace sepi::mod
