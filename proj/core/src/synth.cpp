#include "sepi/synth.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include <nlohmann/json.hpp>

#include "sepi/errors.hpp"

namespace sepi::synth {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = 180.0 / kPi;

std::vector<double> axis(const Grid& g) {
  if ((g.hi - g.lo) / g.step > 1e7) throw ValidationError("grid has too many points");
  const auto n = static_cast<std::size_t>(std::floor((g.hi - g.lo) / g.step + 1e-9)) + 1;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = g.lo + static_cast<double>(i) * g.step;
  return x;
}

Grid grid_or(const SynthConfig& cfg, Grid fallback) { return cfg.grid.value_or(fallback); }

double gaussian(double x, double c, double fwhm, double area) {
  const double d = (x - c) / fwhm;
  return area * 2.0 * std::sqrt(std::log(2.0) / kPi) / fwhm * std::exp(-4.0 * std::log(2.0) * d * d);
}

double lorentzian(double x, double c, double fwhm, double area) {
  const double hw = 0.5 * fwhm;
  return area * hw / kPi / ((x - c) * (x - c) + hw * hw);
}

std::string key(const char* stem, std::size_t i, const char* field = "") {
  return std::string(stem) + std::to_string(i) + field;
}

spectra::SpectrumKind kind_from(double v) {
  switch (static_cast<int>(v)) {
    case 0: return spectra::SpectrumKind::intensity;
    case 1: return spectra::SpectrumKind::absorption_coefficient;
    case 2: return spectra::SpectrumKind::luminescence;
  }
  throw ValidationError("spectrum kind must be 0 (intensity), 1 (absorption) or 2 (luminescence)");
}

std::size_t count_param(const SynthConfig& cfg, const std::string& k, double fallback) {
  const double v = cfg.param(k, fallback);
  if (!(v >= 0.0) || v != std::floor(v) || v > 1000.0) throw ValidationError(k + " must be a small non-negative integer");
  return static_cast<std::size_t>(v);
}

}  // namespace

double Rng::uniform() {
  return 1.0 - static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (spare_) {
    const double z = *spare_;
    spare_.reset();
    return z;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double t = 2.0 * kPi * uniform();
  spare_ = r * std::sin(t);
  return r * std::cos(t);
}

std::string_view target_name(Target t) noexcept {
  switch (t) {
    case Target::relaxation: return "relaxation";
    case Target::decay: return "decay";
    case Target::spectrum: return "spectrum";
    case Target::absorption: return "absorption";
    case Target::modulation: return "modulation";
    case Target::raman: return "raman";
  }
  return "?";
}

Target parse_target(std::string_view s) {
  for (Target t : {Target::relaxation, Target::decay, Target::spectrum, Target::absorption, Target::modulation,
                   Target::raman})
    if (target_name(t) == s) return t;
  throw ValidationError("unknown synth target '" + std::string(s) + "'");
}

void SynthConfig::validate() const {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ValidationError("sigma must be finite and >= 0");
  if (grid) {
    if (!(grid->hi > grid->lo) || !(grid->step > 0.0)) throw ValidationError("grid needs lo < hi and step > 0");
  }
  for (const auto& [k, v] : params)
    if (!std::isfinite(v)) throw ValidationError("parameter " + k + " is not finite");
}

double SynthConfig::param(const std::string& k, double fallback) const {
  const auto it = params.find(k);
  return it == params.end() ? fallback : it->second;
}

std::vector<relax::Point> relaxation_series(const SynthConfig& cfg) {
  cfg.validate();
  const double a = cfg.param("A", 2.0e-9);
  const double b = cfg.param("B", 1.0 / (4.6 * 3600.0));
  const double n = cfg.param("exponent", 9.0);
  if (!(a >= 0.0) || !(b >= 0.0) || !(a + b > 0.0)) throw ValidationError("A and B must be >= 0 and not both zero");
  const double rel = cfg.param("weight_sigma", cfg.sigma > 0.0 ? cfg.sigma : 0.01);
  Rng rng(cfg.seed);
  std::vector<relax::Point> pts;
  for (double t : axis(grid_or(cfg, {2.1, 6.4, 0.39}))) {
    if (!(t > 0.0)) throw ValidationError("temperatures must be positive");
    const double t1 = 1.0 / (a * std::pow(t, n) + b);
    double obs = t1;
    if (cfg.sigma > 0.0) {
      do obs = t1 * (1.0 + cfg.sigma * rng.normal());
      while (!(obs > 0.0));
    }
    pts.push_back({t, obs, rel * t1});
  }
  return pts;
}

relax::PolarizationDecaySeries decay_series(const SynthConfig& cfg) {
  cfg.validate();
  const double t1 = cfg.param("T1_s", 1146.0);
  const double s0 = cfg.param("amplitude", 1.0);
  if (!(t1 > 0.0)) throw ValidationError("T1_s must be positive");
  Rng rng(cfg.seed);
  relax::PolarizationDecaySeries d;
  d.temperature_k = cfg.param("temperature_K", 4.2);
  d.delays_s = axis(grid_or(cfg, {0.0, 5.0 * t1, 0.25 * t1}));
  for (double t : d.delays_s) d.signal.push_back(s0 * std::exp(-t / t1) + cfg.sigma * rng.normal());
  return d;
}

spectra::Spectrum line_spectrum(const SynthConfig& cfg) {
  cfg.validate();
  struct Line {
    double center, fwhm, area, shape;
  };
  const Line defaults[] = {{3444.0, 2.0, 1.0, 0.0}, {3150.0, 120.0, 5.6, 0.0}};
  const std::size_t nl = count_param(cfg, "n_lines", 2);
  std::vector<Line> lines;
  for (std::size_t i = 0; i < nl; ++i) {
    if (i >= 2 && !cfg.params.count(key("line", i, "_center"))) throw ValidationError(key("line", i, "_center") + " is required");
    const Line d = i < 2 ? defaults[i] : Line{0.0, 1.0, 1.0, 0.0};
    Line l{cfg.param(key("line", i, "_center"), d.center), cfg.param(key("line", i, "_fwhm"), d.fwhm),
           cfg.param(key("line", i, "_area"), d.area), cfg.param(key("line", i, "_shape"), d.shape)};
    if (!(l.fwhm > 0.0)) throw ValidationError(key("line", i, "_fwhm") + " must be positive");
    lines.push_back(l);
  }
  const double offset = cfg.param("baseline", 0.0), slope = cfg.param("baseline_slope", 0.0);
  const std::vector<double> x = axis(grid_or(cfg, {2600.0, 3500.0, 0.25}));
  Rng rng(cfg.seed);
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double v = offset + slope * (x[i] - x.front());
    for (const Line& l : lines)
      v += l.shape > 0.5 ? lorentzian(x[i], l.center, l.fwhm, l.area) : gaussian(x[i], l.center, l.fwhm, l.area);
    y[i] = v + cfg.sigma * rng.normal();
  }
  return {x, std::move(y), kind_from(cfg.param("kind", 2.0)), cfg.param("resolution", 1.0)};
}

AbsorptionPair absorption_pair(const SynthConfig& cfg) {
  cfg.validate();
  const double center = cfg.param("center", 3444.0);
  const double fwhm = cfg.param("fwhm", 1.0);
  const double area = cfg.param("integrated_alpha", 0.839);
  const double path = cfg.param("path_cm", 1.0);
  const double i0 = cfg.param("reference_level", 1.0);
  const double i0_slope = cfg.param("reference_slope", 0.0);
  const double res = cfg.param("resolution", 0.1);
  if (!(fwhm > 0.0) || !(area >= 0.0) || !(path > 0.0) || !(i0 > 0.0))
    throw ValidationError("absorption synth needs fwhm > 0, area >= 0, path > 0, reference level > 0");
  const std::vector<double> x = axis(grid_or(cfg, {3420.0, 3470.0, 0.05}));
  Rng rng(cfg.seed);
  std::vector<double> ref(x.size()), smp(x.size()), alpha(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    alpha[i] = gaussian(x[i], center, fwhm, area);
    const double base = i0 + i0_slope * (x[i] - x.front());
    smp[i] = base * std::exp(-alpha[i] * path) + cfg.sigma * rng.normal();
    ref[i] = base + cfg.sigma * rng.normal();
  }
  using spectra::SpectrumKind;
  return {spectra::Spectrum(x, smp, SpectrumKind::intensity, res), spectra::Spectrum(x, ref, SpectrumKind::intensity, res),
          spectra::Spectrum(x, alpha, SpectrumKind::absorption_coefficient, res), path};
}

mod::ModulationDataset modulation_sweep(const SynthConfig& cfg) {
  cfg.validate();
  const double t1 = cfg.param("t1_ns", 7.7) * 1e-9;
  const double scale = cfg.param("scale", 1.0);
  if (!(t1 > 0.0) || !(scale > 0.0)) throw ValidationError("t1_ns and scale must be positive");
  std::vector<double> f;
  if (cfg.grid) {
    if (!(cfg.grid->lo > 0.0)) throw ValidationError("modulation grid must start above 0 Hz");
    for (double e : axis({std::log10(cfg.grid->lo), std::log10(cfg.grid->hi), cfg.grid->step})) f.push_back(std::pow(10.0, e));
  } else {
    const double lo = cfg.param("f_min_hz", 2e6), hi = cfg.param("f_max_hz", 1e8);
    const std::size_t n = count_param(cfg, "points", 41);
    if (!(lo > 0.0) || !(hi > lo) || n < 2) throw ValidationError("need 0 < f_min_hz < f_max_hz and points >= 2");
    for (std::size_t i = 0; i < n; ++i)
      f.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1)));
  }
  Rng rng(cfg.seed);
  mod::ModulationDataset d;
  d.frequency_hz = f;
  for (double fi : f) {
    const mod::Response r = mod::response_model(fi, t1);
    double a = scale * r.amplitude, p = r.phase_deg;
    if (cfg.sigma > 0.0) {
      do a = scale * r.amplitude * (1.0 + cfg.sigma * rng.normal());
      while (!(a > 0.0));
      do p = r.phase_deg * (1.0 + cfg.sigma * rng.normal());
      while (!(p > -90.0 && p < 0.0));
    }
    d.amplitude.push_back(a);
    d.phase_deg.push_back(p);
  }
  return d;
}

raman::RamanSession raman_session(const SynthConfig& cfg) {
  cfg.validate();
  const double lasers_default[] = {9246.49, 9249.89, 9253.28};
  const double raman_default[] = {2223.1, 2195.5};
  const double pl_default[] = {7040.0};
  auto list = [&](const char* stem, const char* count, std::span<const double> defs) {
    const std::size_t n = count_param(cfg, count, static_cast<double>(defs.size()));
    std::vector<double> out;
    for (std::size_t i = 0; i < n; ++i) {
      if (i >= defs.size() && !cfg.params.count(key(stem, i))) throw ValidationError(key(stem, i) + " is required");
      out.push_back(cfg.param(key(stem, i), i < defs.size() ? defs[i] : 0.0));
    }
    return out;
  };
  const auto lasers = list("laser", "n_laser", lasers_default);
  const auto offsets = list("raman", "n_raman", raman_default);
  const auto pls = list("pl", "n_pl", pl_default);
  const double fwhm = cfg.param("fwhm", 0.3), amp = cfg.param("amplitude", 1.0);
  if (!(fwhm > 0.0)) throw ValidationError("fwhm must be positive");
  const std::vector<double> x = axis(grid_or(cfg, {6990.0, 7080.0, 0.05}));
  Rng rng(cfg.seed);
  raman::RamanSession s;
  s.laser_cm = lasers;
  s.match_tolerance = cfg.param("tolerance", raman::default_tolerance_cm);
  // Peak heights are `amp`; gaussian() is area-normalised so scale back.
  const double area = amp * fwhm / (2.0 * std::sqrt(std::log(2.0) / kPi));
  for (double laser : lasers) {
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      double v = 0.0;
      for (double o : offsets) v += gaussian(x[i], laser - o, fwhm, area);
      for (double c : pls) v += gaussian(x[i], c, fwhm, area);
      y[i] = v + cfg.sigma * rng.normal();
    }
    s.spectra.emplace_back(x, std::move(y), spectra::SpectrumKind::luminescence, cfg.param("resolution", 0.1));
  }
  return s;
}

Dataset generate(Target target, const SynthConfig& cfg) {
  Dataset d{target, {}, {}, {}};
  switch (target) {
    case Target::relaxation: {
      const auto pts = relaxation_series(cfg);
      d.files.emplace_back("", io::points_table(pts));
      d.truth = {{"A", cfg.param("A", 2.0e-9)}, {"B", cfg.param("B", 1.0 / (4.6 * 3600.0))},
                 {"exponent", cfg.param("exponent", 9.0)}};
      d.notes["noise"] = "relative gaussian on T1";
      break;
    }
    case Target::decay: {
      const auto s = decay_series(cfg);
      d.files.emplace_back("", io::decay_table(s));
      d.truth = {{"T1_s", cfg.param("T1_s", 1146.0)}, {"amplitude", cfg.param("amplitude", 1.0)},
                 {"temperature_K", s.temperature_k}};
      d.notes["noise"] = "additive gaussian on signal";
      break;
    }
    case Target::spectrum: {
      const auto s = line_spectrum(cfg);
      d.files.emplace_back("", io::spectrum_table(s));
      const std::size_t nl = count_param(cfg, "n_lines", 2);
      const double defs[][3] = {{3444.0, 2.0, 1.0}, {3150.0, 120.0, 5.6}};
      for (std::size_t i = 0; i < nl; ++i) {
        d.truth[key("line", i, "_center")] = cfg.param(key("line", i, "_center"), i < 2 ? defs[i][0] : 0.0);
        d.truth[key("line", i, "_fwhm")] = cfg.param(key("line", i, "_fwhm"), i < 2 ? defs[i][1] : 1.0);
        d.truth[key("line", i, "_area")] = cfg.param(key("line", i, "_area"), i < 2 ? defs[i][2] : 1.0);
      }
      d.truth["resolution"] = s.resolution();
      d.notes["noise"] = "additive gaussian";
      break;
    }
    case Target::absorption: {
      const auto p = absorption_pair(cfg);
      d.files.emplace_back("_sample", io::spectrum_table(p.sample));
      d.files.emplace_back("_reference", io::spectrum_table(p.reference));
      d.truth = {{"center", cfg.param("center", 3444.0)}, {"fwhm", cfg.param("fwhm", 1.0)},
                 {"integrated_alpha", cfg.param("integrated_alpha", 0.839)}, {"path_cm", p.path_cm},
                 {"resolution", p.sample.resolution()}};
      d.notes["noise"] = "additive gaussian on both intensities";
      break;
    }
    case Target::modulation: {
      const auto m = modulation_sweep(cfg);
      d.files.emplace_back("", io::modulation_table(m));
      d.truth = {{"t1_ns", cfg.param("t1_ns", 7.7)}, {"scale", cfg.param("scale", 1.0)}};
      d.notes["noise"] = "relative gaussian on amplitude and phase, phase truncated to (-90, 0)";
      break;
    }
    case Target::raman: {
      const auto s = raman_session(cfg);
      for (std::size_t i = 0; i < s.spectra.size(); ++i) {
        d.files.emplace_back(key("_laser", i), io::spectrum_table(s.spectra[i]));
        d.truth[key("laser", i)] = s.laser_cm[i];
      }
      const double raman_default[] = {2223.1, 2195.5};
      const std::size_t nr = count_param(cfg, "n_raman", 2);
      for (std::size_t i = 0; i < nr; ++i) d.truth[key("raman", i)] = cfg.param(key("raman", i), i < 2 ? raman_default[i] : 0.0);
      const std::size_t np = count_param(cfg, "n_pl", 1);
      for (std::size_t i = 0; i < np; ++i) d.truth[key("pl", i)] = cfg.param(key("pl", i), i == 0 ? 7040.0 : 0.0);
      d.truth["fwhm"] = cfg.param("fwhm", 0.3);
      d.truth["resolution"] = s.spectra.front().resolution();
      d.notes["noise"] = "additive gaussian";
      break;
    }
  }
  return d;
}

std::string sidecar_json(const Dataset& d, const SynthConfig& cfg, const std::vector<std::string>& files) {
  nlohmann::ordered_json j;
  j["target"] = target_name(d.target);
  j["seed"] = cfg.seed;
  j["rng"] = rng_algorithm;
  j["sigma"] = cfg.sigma;
  if (cfg.grid) j["grid"] = {{"lo", cfg.grid->lo}, {"hi", cfg.grid->hi}, {"step", cfg.grid->step}};
  j["params"] = cfg.params;
  j["truth"] = d.truth;
  j["notes"] = d.notes;
  j["files"] = files;
  return j.dump(2) + "\n";
}

std::vector<std::filesystem::path> write(const Dataset& d, const SynthConfig& cfg, const std::filesystem::path& out) {
  namespace fs = std::filesystem;
  const fs::path dir = out.parent_path();
  const std::string stem = out.stem().string();
  const std::string ext = out.has_extension() ? out.extension().string() : ".csv";
  std::vector<fs::path> written;
  std::vector<std::string> names;
  for (const auto& [suffix, table] : d.files) {
    const fs::path p = dir / (stem + suffix + ext);
    io::write_table(p, table);
    written.push_back(p);
    names.push_back(p.filename().string());
  }
  const fs::path side = dir / (stem + ".truth.json");
  std::ofstream s(side, std::ios::binary);
  if (!s) throw ValidationError("cannot write file: " + side.string());
  s << sidecar_json(d, cfg, names);
  written.push_back(side);
  return written;
}

}  // namespace sepi::synth
