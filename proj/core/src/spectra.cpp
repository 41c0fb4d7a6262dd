#include "sepi/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "sepi/errors.hpp"

namespace sepi::spectra {

namespace {

std::string fmt_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

bool same_grid(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > 1e-9 * std::max(1.0, std::abs(a[i]))) return false;
  return true;
}

double interp(std::span<const double> x, std::span<const double> y, double at) {
  auto it = std::lower_bound(x.begin(), x.end(), at);
  if (it == x.begin()) return y.front();
  if (it == x.end()) return y.back();
  const std::size_t j = static_cast<std::size_t>(it - x.begin());
  if (x[j] == at) return y[j];
  const double t = (at - x[j - 1]) / (x[j] - x[j - 1]);
  return y[j - 1] + t * (y[j] - y[j - 1]);
}

}  // namespace

Spectrum::Spectrum(std::vector<double> wavenumber_cm, std::vector<double> value, SpectrumKind kind,
                   double resolution_cm)
    : wavenumber_(std::move(wavenumber_cm)), value_(std::move(value)), kind_(kind), resolution_(resolution_cm) {
  if (wavenumber_.size() != value_.size()) throw ValidationError("spectrum axis and values differ in length");
  if (wavenumber_.size() < 2) throw ValidationError("spectrum needs at least 2 points");
  for (std::size_t i = 0; i < wavenumber_.size(); ++i) {
    if (!std::isfinite(wavenumber_[i]) || !std::isfinite(value_[i])) throw DataError("non-finite spectrum sample", i);
    if (i > 0 && !(wavenumber_[i] > wavenumber_[i - 1]))
      throw DataError("wavenumbers must be strictly ascending", i);
  }
  if (!(resolution_ > 0.0)) throw ValidationError("spectral resolution must be positive");
  if (resolution_ > 10.0 * median_spacing() * (1.0 + 1e-12))
    throw ValidationError("resolution " + fmt_num(resolution_) + " cm^-1 exceeds 10x the median grid spacing");
}

double Spectrum::median_spacing() const {
  std::vector<double> d(wavenumber_.size() - 1);
  for (std::size_t i = 1; i < wavenumber_.size(); ++i) d[i - 1] = wavenumber_[i] - wavenumber_[i - 1];
  auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
  std::nth_element(d.begin(), mid, d.end());
  return *mid;
}

double Spectrum::value_at(double x) const {
  if (x < lo() || x > hi()) throw BoundsError("wavenumber " + fmt_num(x) + " outside spectrum range");
  return interp(wavenumber_, value_, x);
}

Spectrum Spectrum::scaled(double factor) const {
  std::vector<double> v = value_;
  for (double& y : v) y *= factor;
  return {wavenumber_, std::move(v), kind_, resolution_};
}

Spectrum Spectrum::shifted(double delta) const {
  std::vector<double> x = wavenumber_;
  for (double& w : x) w += delta;
  return {std::move(x), value_, kind_, resolution_};
}

Spectrum Spectrum::with_kind(SpectrumKind kind) const { return {wavenumber_, value_, kind, resolution_}; }

Spectrum resample(const Spectrum& s, std::span<const double> grid) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = s.value_at(grid[i]);
  return {std::vector<double>(grid.begin(), grid.end()), std::move(v), s.kind(), s.resolution()};
}

void PeakRegion::validate(const Spectrum& s) const {
  if (!(lo < hi)) throw ValidationError("peak region needs lo < hi");
  if (lo < s.lo() || hi > s.hi())
    throw BoundsError("region " + fmt_num(lo) + ":" + fmt_num(hi) + " exceeds spectrum range " + fmt_num(s.lo()) +
                      ":" + fmt_num(s.hi()));
}

Baseline estimate_baseline(const Spectrum& s, const PeakRegion& region) {
  region.validate(s);
  Baseline b;
  b.anchor = 0.5 * (region.lo + region.hi);
  if (region.baseline == BaselineMode::none) return b;

  const double width = 3.0 * s.resolution();
  const auto x = s.wavenumber();
  const auto y = s.value();
  std::vector<double> fx, fy;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const bool left = x[i] >= region.lo - width && x[i] < region.lo;
    const bool right = x[i] > region.hi && x[i] <= region.hi + width;
    if (left || right) {
      fx.push_back(x[i]);
      fy.push_back(y[i]);
    }
  }
  if (fx.empty()) {
    fx = {region.lo, region.hi};
    fy = {s.value_at(region.lo), s.value_at(region.hi)};
  }

  const double n = static_cast<double>(fx.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < fx.size(); ++i) mx += fx[i] - b.anchor, my += fy[i];
  mx /= n;
  my /= n;
  if (region.baseline == BaselineMode::linear) {
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < fx.size(); ++i) {
      const double dx = fx[i] - b.anchor - mx;
      sxx += dx * dx;
      sxy += dx * (fy[i] - my);
    }
    b.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  }
  b.offset = my - b.slope * mx;
  const std::size_t n_par = region.baseline == BaselineMode::linear ? 2 : 1;
  if (fx.size() > n_par) {
    double ss = 0.0;
    for (std::size_t i = 0; i < fx.size(); ++i) ss += std::pow(fy[i] - b.at(fx[i]), 2);
    b.noise = std::sqrt(ss / static_cast<double>(fx.size() - n_par));
  }
  return b;
}

Quantity integrate_line(const Spectrum& s, const PeakRegion& region) {
  return integrate_line(s, region, estimate_baseline(s, region));
}

Quantity integrate_line(const Spectrum& s, const PeakRegion& region, const Baseline& baseline) {
  region.validate(s);
  const auto x = s.wavenumber();
  std::vector<double> nx{region.lo}, ny{s.value_at(region.lo)};
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (x[i] > region.lo && x[i] < region.hi) {
      nx.push_back(x[i]);
      ny.push_back(s.value()[i]);
    }
  }
  nx.push_back(region.hi);
  ny.push_back(s.value_at(region.hi));

  double area = 0.0, w2 = 0.0;
  std::vector<double> weight(nx.size(), 0.0);
  for (std::size_t i = 1; i < nx.size(); ++i) {
    const double h = nx[i] - nx[i - 1];
    area += 0.5 * h * ((ny[i] - baseline.at(nx[i])) + (ny[i - 1] - baseline.at(nx[i - 1])));
    weight[i] += 0.5 * h;
    weight[i - 1] += 0.5 * h;
  }
  for (double wi : weight) w2 += wi * wi;
  const Unit u = s.kind() == SpectrumKind::absorption_coefficient ? Unit::per_square_centimeter : Unit::dimensionless;
  return {area, baseline.noise * std::sqrt(w2), u};
}

AbsorptionSpectrum absorption_coefficient(const Spectrum& sample, const Spectrum& reference, double length_cm) {
  if (sample.kind() != SpectrumKind::intensity || reference.kind() != SpectrumKind::intensity)
    throw ValidationError("absorption needs two intensity spectra");
  if (!(length_cm > 0.0)) throw ValidationError("sample length must be positive");
  for (std::size_t i = 0; i < reference.size(); ++i)
    if (!(reference.value()[i] > 0.0))
      throw DataError("reference intensity is not positive at index " + std::to_string(i), i);

  std::vector<std::string> warnings;
  const auto sx = sample.wavenumber();
  const bool direct = same_grid(sx, reference.wavenumber());
  if (!direct) {
    const double ov = std::min(sample.hi(), reference.hi()) - std::max(sample.lo(), reference.lo());
    if (ov < 0.9 * (sample.hi() - sample.lo()))
      throw ValidationError("reference covers less than 90% of the sample range");
    warnings.push_back("reference resampled onto sample grid by linear interpolation");
  }

  std::vector<double> ax, ay;
  std::vector<std::size_t> excluded;
  std::size_t outside = 0, saturated = 0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    double i0;
    if (direct) {
      i0 = reference.value()[i];
    } else if (sx[i] < reference.lo() || sx[i] > reference.hi()) {
      excluded.push_back(i);
      ++outside;
      continue;
    } else {
      i0 = reference.value_at(sx[i]);
    }
    const double is = sample.value()[i];
    if (!(is > 0.0)) {
      excluded.push_back(i);
      ++saturated;
      continue;
    }
    ax.push_back(sx[i]);
    ay.push_back(-std::log(is / i0) / length_cm);
  }
  if (saturated > 0)
    warnings.push_back(std::to_string(saturated) + " saturated sample point(s) with I_s <= 0 excluded");
  if (outside > 0) warnings.push_back(std::to_string(outside) + " sample point(s) outside the reference grid excluded");
  if (ax.size() < 2) throw DataError("fewer than 2 usable points after exclusion");

  const double res = std::max(sample.resolution(), reference.resolution());
  Spectrum alpha(std::move(ax), std::move(ay), SpectrumKind::absorption_coefficient,
                 std::min(res, 10.0 * sample.median_spacing()));
  return {std::move(alpha), std::move(excluded), std::move(warnings)};
}

Spectrum beer_lambert_transmission(const Spectrum& alpha, const Spectrum& reference, double length_cm) {
  if (!(length_cm > 0.0)) throw ValidationError("sample length must be positive");
  const Spectrum ref = same_grid(alpha.wavenumber(), reference.wavenumber())
                           ? reference
                           : resample(reference, alpha.wavenumber());
  std::vector<double> v(alpha.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) v[i] = ref.value()[i] * std::exp(-alpha.value()[i] * length_cm);
  const auto x = alpha.wavenumber();
  return {std::vector<double>(x.begin(), x.end()), std::move(v), SpectrumKind::intensity, reference.resolution()};
}

std::vector<Peak> find_peaks(const Spectrum& s, double min_prominence) {
  if (!(min_prominence > 0.0)) throw ValidationError("min_prominence must be positive");
  const auto x = s.wavenumber();
  const auto y = s.value();
  const std::size_t n = s.size();
  std::vector<Peak> peaks;

  std::size_t i = 1;
  while (i + 1 < n) {
    if (!(y[i - 1] < y[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && y[j + 1] == y[i]) ++j;
    if (j + 1 >= n || !(y[j + 1] < y[i])) {
      i = j + 1;
      continue;
    }
    const std::size_t pk = (i + j) / 2;
    const double h = y[pk];

    // Prominence: lowest point on each side before terrain rises above h.
    double lmin = h;
    std::size_t lb = pk;
    for (std::size_t k = pk; k-- > 0;) {
      if (y[k] > h) break;
      if (y[k] < lmin) lmin = y[k], lb = k;
    }
    double rmin = h;
    std::size_t rb = pk;
    for (std::size_t k = pk + 1; k < n; ++k) {
      if (y[k] > h) break;
      if (y[k] < rmin) rmin = y[k], rb = k;
    }
    const double prom = h - std::max(lmin, rmin);
    i = j + 1;
    if (prom < min_prominence) continue;

    double center = x[pk], vertex = h;
    if (i == pk + 1 && pk > 0) {
      // Vertex of the parabola through (pk-1, pk, pk+1), valid on uneven grids.
      const double x0 = x[pk - 1], x1 = x[pk], x2 = x[pk + 1];
      const double y0 = y[pk - 1], y1 = y[pk], y2 = y[pk + 1];
      const double d01 = (y1 - y0) / (x1 - x0);
      const double d12 = (y2 - y1) / (x2 - x1);
      const double curv = (d12 - d01) / (x2 - x0);
      if (curv < 0.0) {
        const double lin = d01 - curv * (x0 + x1);
        center = -lin / (2.0 * curv);
        center = std::clamp(center, x0, x2);
        vertex = y1 + d01 * (center - x1) + curv * (center - x0) * (center - x1);
      }
    }

    const double level = h - 0.5 * prom;
    double left = x[lb];
    for (std::size_t k = pk; k > lb; --k) {
      if (y[k - 1] < level) {
        left = x[k - 1] + (level - y[k - 1]) / (y[k] - y[k - 1]) * (x[k] - x[k - 1]);
        break;
      }
    }
    double right = x[rb];
    for (std::size_t k = pk; k < rb; ++k) {
      if (y[k + 1] < level) {
        right = x[k] + (y[k] - level) / (y[k] - y[k + 1]) * (x[k + 1] - x[k]);
        break;
      }
    }
    peaks.push_back({center, vertex, right - left, prom});
  }
  return peaks;
}

}  // namespace sepi::spectra
