#include "sepi_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "sepi/absorption.hpp"
#include "sepi/cavity.hpp"
#include "sepi/errors.hpp"
#include "sepi/io.hpp"
#include "sepi/luminescence.hpp"
#include "sepi/modulation.hpp"
#include "sepi/raman.hpp"
#include "sepi/relaxation.hpp"
#include "sepi/spinmodel.hpp"
#include "sepi/synth.hpp"
#include "sepi_cli/report.hpp"

namespace sepi::cli {

namespace {

namespace fs = std::filesystem;
using spectra::BaselineMode;
using spectra::PeakRegion;
using spectra::Spectrum;
using spectra::SpectrumKind;

struct Common {
  bool json = false;
  std::string report_file;
  std::string plot;
};

using Runner = std::function<Report(const Common&)>;

struct Command {
  CLI::App* app;
  Runner run;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_flag("--json", c.json, "Emit the report as a single JSON object");
  sub->add_option("--report-file", c.report_file, "Also write the JSON report to this path");
  sub->add_option("--plot", c.plot, "Write plot-ready columns to this CSV path");
}

std::vector<double> split_numbers(const std::string& s, char sep, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, sep)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ValidationError(what + ": cannot parse '" + s + "'");
    }
  }
  return out;
}

BaselineMode parse_baseline(const std::string& s) {
  if (s == "none") return BaselineMode::none;
  if (s == "constant") return BaselineMode::constant;
  if (s == "linear") return BaselineMode::linear;
  throw ValidationError("baseline must be none, constant or linear");
}

PeakRegion parse_region(const std::string& s, BaselineMode mode, const std::string& what) {
  const auto v = split_numbers(s, ':', what);
  if (v.size() != 2) throw ValidationError(what + " expects lo:hi");
  return {v[0], v[1], mode};
}

double median_spacing(const std::vector<double>& x) {
  std::vector<double> d;
  for (std::size_t i = 1; i < x.size(); ++i) d.push_back(x[i] - x[i - 1]);
  if (d.empty()) return 1.0;
  std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2), d.end());
  return d[d.size() / 2];
}

/// resolution <= 0 means "one median sample spacing".
Spectrum load_spectrum(const std::string& path, SpectrumKind kind, double resolution, Report& r) {
  const io::Table t = io::read_table(path);
  r.input(path);
  if (t.columns.size() < 2) throw ValidationError(path + ": expected two columns");
  const double res = resolution > 0.0 ? resolution : median_spacing(t.columns[0]);
  return Spectrum(t.columns[0], t.columns[1], kind, res);
}

void write_plot(const Common& c, const io::Table& t, Report& r) {
  if (c.plot.empty()) return;
  io::write_table(fs::path(c.plot), t);
  r.add_text("plot_file", c.plot);
}

std::string yes_no(bool b) { return b ? "true" : "false"; }

// ---------------------------------------------------------------- levels

Command setup_levels(CLI::App& app, Common& c) {
  struct Opt {
    double b0 = 0.0, g_e = 2.0057, g_n = 1.07, a_hz = 1.66e9, d_field = 1e-6;
    std::string sweep = "0:0.1:201";
  };
  auto o = std::make_shared<Opt>();
  auto* sub = app.add_subcommand("levels", "Ground-state hyperfine levels and transition frequencies");
  sub->add_option("--B0", o->b0, "Static field (T)")->capture_default_str();
  sub->add_option("--g-e", o->g_e, "Electron g-factor")->capture_default_str();
  sub->add_option("--g-n", o->g_n, "Nuclear g-factor")->capture_default_str();
  sub->add_option("--A-hz", o->a_hz, "Isotropic hyperfine constant (Hz)")->capture_default_str();
  sub->add_option("--dB", o->d_field, "Finite-difference field step for slopes (T)")->capture_default_str();
  sub->add_option("--sweep", o->sweep, "Field sweep lo:hi:count for --plot (T)")->capture_default_str();
  add_common(sub, c);
  return {sub, [o, sub](const Common& c) {
            using namespace spin;
            Report r("levels");
            const SpinSystem sys{o->g_e, o->g_n, o->a_hz, o->b0};
            const LevelSet ls = eigensolve(build_hamiltonian(sys));
            r.add("field", o->b0, 0.0, "T");
            const Level order[] = {Level::singlet, Level::triplet_minus, Level::triplet_zero, Level::triplet_plus};
            for (Level l : order) r.add("energy." + std::string(level_name(l)), ls.energy(l), 0.0, "Hz");
            for (std::size_t i = 0; i < 4; ++i)
              for (std::size_t j = i + 1; j < 4; ++j)
                r.add("transition." + std::string(level_name(order[i])) + "." + std::string(level_name(order[j])),
                      transition_frequency(ls, order[i], order[j]));
            r.add("slope.S0.T0", clock_transition_slope(sys, Level::singlet, Level::triplet_zero, o->d_field),
                  "central difference");
            r.add("slope.S0.T+", clock_transition_slope(sys, Level::singlet, Level::triplet_plus, o->d_field),
                  "central difference");
            r.note("labels follow maximum overlap with the zero-field singlet/triplet basis");
            if (!c.plot.empty()) {
              const auto s = split_numbers(o->sweep, ':', "--sweep");
              if (s.size() != 3 || !(s[2] >= 2) || !(s[1] > s[0])) throw ValidationError("--sweep expects lo:hi:count");
              const auto n = static_cast<std::size_t>(s[2]);
              std::vector<double> fields(n);
              for (std::size_t i = 0; i < n; ++i) fields[i] = s[0] + (s[1] - s[0]) * static_cast<double>(i) / static_cast<double>(n - 1);
              const auto tracks = track_levels(sys, fields);
              io::Table t{{"field_T", "S0_Hz", "T-_Hz", "T0_Hz", "T+_Hz"}, std::vector<std::vector<double>>(5)};
              for (std::size_t i = 0; i < n; ++i) {
                t.columns[0].push_back(fields[i]);
                for (std::size_t k = 0; k < 4; ++k) t.columns[k + 1].push_back(tracks[i].energy(order[k]));
              }
              write_plot(c, t, r);
            }
            return r;
          }};
}

// ---------------------------------------------------------------- t1

relax::TemperatureForm parse_form(const std::string& s) {
  if (s == "raman_plus_floor") return relax::TemperatureForm::raman_plus_floor;
  if (s == "raman_only") return relax::TemperatureForm::raman_only;
  if (s == "free_exponent") return relax::TemperatureForm::free_exponent;
  throw ValidationError("--form must be raman_plus_floor, raman_only or free_exponent");
}

void report_model(Report& r, const relax::RelaxationModel& m, relax::TemperatureForm form) {
  if (form == relax::TemperatureForm::free_exponent) {
    r.add("A", m.raman_coefficient, std::sqrt(m.covariance(0, 0)), "s^-1 K^-n");
    r.add("exponent", *m.fitted_exponent);
    r.note("free exponent is a diagnostic; the physical model fixes n = 9");
  } else {
    r.add(form == relax::TemperatureForm::raman_only ? "C" : "A", m.raman_coefficient_q());
  }
  if (form != relax::TemperatureForm::raman_only) {
    r.add("B", m.floor_rate_q());
    if (m.floor_rate > 0.0) r.add("T1_floor", m.low_temperature_t1().in(Unit::hour), "1/B");
  }
}

Command setup_t1_fit(CLI::App& app, Common& c) {
  struct Opt {
    std::string data, decay, form = "raman_plus_floor";
    double temperature = 0.0;
    std::vector<double> predict{4.2};
  };
  auto o = std::make_shared<Opt>();
  auto* sub = app.add_subcommand("t1-fit", "Fit 1/T1 = A T^9 + B, or a single polarization decay");
  sub->add_option("--data", o->data, "CSV temperature_K,T1_s,sigma_s");
  sub->add_option("--decay", o->decay, "CSV delay_s,signal (single-temperature decay)");
  sub->add_option("--form", o->form, "raman_plus_floor | raman_only | free_exponent")->capture_default_str();
  sub->add_option("--temperature", o->temperature, "Temperature of the --decay series (K)")->capture_default_str();
  sub->add_option("--predict", o->predict, "Temperatures at which to report T1 (K)")->capture_default_str();
  add_common(sub, c);
  return {sub, [o](const Common& c) {
            Report r("t1-fit");
            if (o->data.empty() == o->decay.empty()) throw ValidationError("give exactly one of --data or --decay");
            if (!o->decay.empty()) {
              const auto series = io::read_decay(o->decay, o->temperature);
              r.input(o->decay);
              const relax::DecayFit f = relax::fit_decay(series);
              r.add("temperature", o->temperature, 0.0, "K");
              r.add("T1", f.t1);
              r.add("amplitude", f.amplitude);
              io::Table t{{"delay_s", "signal", "model"}, {series.delays_s, series.signal, {}}};
              for (double d : series.delays_s) t.columns[2].push_back(f.amplitude.value() * std::exp(-d / f.t1.value()));
              write_plot(c, t, r);
              return r;
            }
            const auto pts = io::read_points(o->data);
            r.input(o->data);
            const auto form = parse_form(o->form);
            const relax::RelaxationModel m = relax::fit_temperature_model(pts, form);
            r.add_text("form", o->form);
            report_model(r, m, form);
            for (double t : o->predict) {
              const Quantity t1 = relax::predict_t1(m, t);
              r.add("T1@" + format_value(t) + "K", t1);
              r.add("T1@" + format_value(t) + "K.minutes", t1.in(Unit::minute));
            }
            io::Table t{{"temperature_K", "T1_s", "sigma_s", "model_T1_s"}, std::vector<std::vector<double>>(4)};
            for (const auto& p : pts) {
              t.columns[0].push_back(p.temperature_k);
              t.columns[1].push_back(p.t1_s);
              t.columns[2].push_back(p.sigma_s);
              t.columns[3].push_back(1.0 / m.rate(p.temperature_k));
            }
            write_plot(c, t, r);
            return r;
          }};
}

Command setup_t1_predict(CLI::App& app, Common& c) {
  struct Opt {
    double a = 2.0e-9, b = 0.0, b_hours = 4.6, sigma_a = 0.0, sigma_b = 0.0, exponent = 9.0;
    std::vector<double> t{4.2};
  };
  auto o = std::make_shared<Opt>();
  auto* sub = app.add_subcommand("t1-predict", "T1 at given temperatures from known A and B");
  sub->add_option("--A", o->a, "Raman coefficient (s^-1 K^-9)")->capture_default_str();
  auto* b = sub->add_option("--B", o->b, "Temperature-independent rate (s^-1)");
  sub->add_option("--B-hours", o->b_hours, "Floor given as 1/B in hours when --B is absent")->capture_default_str()->excludes(b);
  sub->add_option("--sigma-A", o->sigma_a, "1-sigma on A")->capture_default_str();
  sub->add_option("--sigma-B", o->sigma_b, "1-sigma on B (s^-1)")->capture_default_str();
  sub->add_option("--exponent", o->exponent, "Temperature exponent")->capture_default_str();
  sub->add_option("--T", o->t, "Temperatures (K)")->capture_default_str();
  add_common(sub, c);
  return {sub, [o, b](const Common& c) {
            Report r("t1-predict");
            const double bv = b->count() ? o->b : 1.0 / (o->b_hours * 3600.0);
            if (!(o->a >= 0.0) || !(bv >= 0.0) || !(o->sigma_a >= 0.0) || !(o->sigma_b >= 0.0))
              throw ValidationError("A, B and their sigmas must be >= 0");
            relax::RelaxationModel m;
            m.raman_coefficient = o->a;
            m.floor_rate = bv;
            m.exponent = o->exponent;
            m.covariance(0, 0) = o->sigma_a * o->sigma_a;
            m.covariance(1, 1) = o->sigma_b * o->sigma_b;
            r.add("A", m.raman_coefficient_q());
            r.add("B", m.floor_rate_q());
            io::Table t{{"temperature_K", "T1_s"}, {{}, {}}};
            for (double tk : o->t) {
              const Quantity t1 = relax::predict_t1(m, tk);
              r.add("T1@" + format_value(tk) + "K", t1);
              r.add("T1@" + format_value(tk) + "K.minutes", t1.in(Unit::minute));
              t.columns[0].push_back(tk);
              t.columns[1].push_back(t1.value());
            }
            write_plot(c, t, r);
            return r;
          }};
}

// ---------------------------------------------------------------- absorption

absorption::LocalField local_field_or_throw(const std::string& s) {
  const auto lf = absorption::parse_local_field(s);
  if (!lf) throw ValidationError("--local-field must be none or lorentz");
  return *lf;
}

Command setup_absorption(CLI::App& app, Common& c) {
  struct Opt {
    std::string sample, reference, region, baseline = "constant", local_field = "none";
    double length_cm = 0.0, resolution = 0.0, concentration = 0.0, concentration_sigma = 0.0;
    double integrated = 0.0, integrated_sigma = 0.0, center = absorption::zpl_wavenumber_cm;
    double n = absorption::silicon_refractive_index;
  };
  auto o = std::make_shared<Opt>();
  auto* sub = app.add_subcommand("absorption", "Absorption coefficient, conversion factor and dipole moment");
  sub->add_option("--sample", o->sample, "Sample transmission spectrum CSV");
  sub->add_option("--reference", o->reference, "Reference (I0) spectrum CSV");
  sub->add_option("--length-cm", o->length_cm, "Optical path length (cm)");
  sub->add_option("--region", o->region, "Integration window lo:hi (cm^-1)");
  sub->add_option("--baseline", o->baseline, "none | constant | linear")->capture_default_str();
  sub->add_option("--resolution", o->resolution, "Instrument resolution (cm^-1); 0 = sample spacing")->capture_default_str();
  sub->add_option("--integrated-alpha", o->integrated, "Integrated absorption (cm^-2) instead of spectra");
  sub->add_option("--integrated-alpha-sigma", o->integrated_sigma, "1-sigma on --integrated-alpha")->capture_default_str();
  sub->add_option("--concentration", o->concentration, "Absorber concentration (cm^-3)")->required();
  sub->add_option("--concentration-sigma", o->concentration_sigma, "1-sigma on concentration")->capture_default_str();
  sub->add_option("--center", o->center, "Line centre (cm^-1)")->capture_default_str();
  sub->add_option("--n", o->n, "Refractive index")->capture_default_str();
  sub->add_option("--local-field", o->local_field, "none | lorentz")->capture_default_str();
  add_common(sub, c);
  return {sub, [o](const Common& c) {
            Report r("absorption");
            const bool spectral = !o->sample.empty() || !o->reference.empty();
            if (spectral == (o->integrated > 0.0))
              throw ValidationError("give either --sample/--reference spectra or --integrated-alpha");
            absorption::AbsorptionAnalysis a{
                Quantity{o->integrated, o->integrated_sigma, Unit::per_square_centimeter},
                Quantity{o->concentration, o->concentration_sigma, Unit::per_cubic_centimeter}, o->center, o->n, {}};
            if (spectral) {
              if (o->sample.empty() || o->reference.empty() || o->region.empty() || !(o->length_cm > 0.0))
                throw ValidationError("spectral mode needs --sample, --reference, --region and --length-cm > 0");
              const Spectrum s = load_spectrum(o->sample, SpectrumKind::intensity, o->resolution, r);
              const Spectrum ref = load_spectrum(o->reference, SpectrumKind::intensity, o->resolution, r);
              const auto abs = spectra::absorption_coefficient(s, ref, o->length_cm);
              for (const auto& w : abs.warnings) r.warn(w);
              const PeakRegion reg = parse_region(o->region, parse_baseline(o->baseline), "--region");
              a.integrated_alpha = spectra::integrate_line(abs.alpha, reg);
              const spectra::Baseline bl = spectra::estimate_baseline(abs.alpha, reg);
              double peak = 0.0;
              const auto x = abs.alpha.wavenumber();
              const auto y = abs.alpha.value();
              for (std::size_t i = 0; i < x.size(); ++i)
                if (x[i] >= reg.lo && x[i] <= reg.hi) peak = std::max(peak, y[i] - (reg.baseline == BaselineMode::none ? 0.0 : bl.at(x[i])));
              if (peak > 0.0) a.peak_alpha = Quantity{peak, bl.noise, Unit::per_centimeter};
              r.add("length", o->length_cm, 0.0, "cm");
              io::Table t{{"wavenumber_cm-1", "alpha_cm-1"},
                          {{x.begin(), x.end()}, {y.begin(), y.end()}}};
              write_plot(c, t, r);
            }
            const auto lf = local_field_or_throw(o->local_field);
            r.add_text("local_field", std::string(absorption::local_field_name(lf)));
            r.add("integrated_alpha", a.integrated_alpha);
            r.add("concentration", a.concentration);
            r.add("f", absorption::conversion_factor(a), "N / integrated alpha");
            if (a.peak_alpha) {
              r.add("peak_alpha", *a.peak_alpha);
              r.add("k", absorption::peak_conversion_factor(a), "N / peak alpha");
            }
            const auto d = absorption::dipole_moment(a, lf);
            r.add("mu", d.mu);
            r.add("tau_zpl", d.zpl_radiative_lifetime.in(Unit::microsecond), "ZPL-only radiative lifetime");
            for (const auto& n : d.notes) r.note(n);
            return r;
          }};
}

// ---------------------------------------------------------------- zpl / efficiency

Command setup_zpl(CLI::App& app, Common& c) {
  struct Opt {
    std::string pl, zpl, sideband, alpha, baseline = "constant";
    double path_cm = 0.0, resolution = 0.0, area_ratio = 0.0, area_ratio_sigma = 0.0, transmission = 1.0;
    double zpl_lifetime_us = 0.0, zpl_lifetime_sigma_us = 0.0;
  };
  auto o = std::make_shared<Opt>();
  auto* sub = app.add_subcommand("zpl", "Zero-phonon-line fraction with optional reabsorption correction");
  sub->add_option("--pl", o->pl, "Photoluminescence spectrum CSV");
  sub->add_option("--zpl", o->zpl, "ZPL window lo:hi (cm^-1)");
  sub->add_option("--sideband", o->sideband, "Sideband window lo:hi; default 700 cm^-1 below the ZPL");
  sub->add_option("--baseline", o->baseline, "none | constant | linear")->capture_default_str();
  sub->add_option("--resolution", o->resolution, "Resolution (cm^-1); 0 = sample spacing")->capture_default_str();
  sub->add_option("--alpha", o->alpha, "Absorption coefficient spectrum over the ZPL (cm^-1)");
  sub->add_option("--path-cm", o->path_cm, "Single-pass reabsorption path (cm)")->capture_default_str();
  sub->add_option("--area-ratio", o->area_ratio, "Sideband/ZPL area ratio instead of a spectrum");
  sub->add_option("--area-ratio-sigma", o->area_ratio_sigma, "1-sigma on --area-ratio")->capture_default_str();
  sub->add_option("--transmission", o->transmission, "Mean transmission <exp(-alpha l)> with --area-ratio")->capture_default_str();
  sub->add_option("--zpl-lifetime-us", o->zpl_lifetime_us, "ZPL radiative lifetime; adds the total radiative lifetime");
  sub->add_option("--zpl-lifetime-sigma-us", o->zpl_lifetime_sigma_us, "1-sigma on --zpl-lifetime-us")->capture_default_str();
  add_common(sub, c);
  return {sub, [o](const Common& c) {
            Report r("zpl");
            lum::ZplAnalysis z;
            if (!o->pl.empty() == (o->area_ratio > 0.0)) throw ValidationError("give either --pl or --area-ratio");
            if (!o->pl.empty()) {
              if (o->zpl.empty()) throw ValidationError("--pl needs --zpl lo:hi");
              const Spectrum pl = load_spectrum(o->pl, SpectrumKind::luminescence, o->resolution, r);
              const auto mode = parse_baseline(o->baseline);
              const PeakRegion zr = parse_region(o->zpl, mode, "--zpl");
              const PeakRegion sb = o->sideband.empty() ? lum::default_sideband(pl, zr) : parse_region(o->sideband, mode, "--sideband");
              std::optional<lum::Reabsorption> re;
              if (!o->alpha.empty()) {
                if (!(o->path_cm > 0.0)) throw ValidationError("--alpha needs --path-cm > 0");
                re = lum::Reabsorption{load_spectrum(o->alpha, SpectrumKind::absorption_coefficient, o->resolution, r), o->path_cm};
              }
              z = lum::zpl_fraction(pl, zr, sb, re);
              r.add("sideband.lo", sb.lo, 0.0, "cm^-1");
              r.add("sideband.hi", sb.hi, 0.0, "cm^-1");
              const auto x = pl.wavenumber();
              const auto y = pl.value();
              io::Table t{{"wavenumber_cm-1", "pl"}, {{x.begin(), x.end()}, {y.begin(), y.end()}}};
              write_plot(c, t, r);
            } else {
              z = lum::zpl_fraction_from_areas(Quantity{1.0, 0.0, Unit::dimensionless},
                                               Quantity{o->area_ratio, o->area_ratio_sigma, Unit::dimensionless},
                                               o->transmission);
            }
            r.add("zpl_area", z.zpl_area);
            r.add("sideband_area", z.sideband_area);
            r.add("fraction_raw", z.fraction_raw.in(Unit::percent));
            r.add("mean_transmission", z.mean_transmission, 0.0, "1", "single pass");
            r.add("fraction_corrected", z.fraction_corrected.in(Unit::percent));
            for (const auto& w : z.warnings) r.warn(w);
            if (o->zpl_lifetime_us > 0.0) {
              const Quantity tz{o->zpl_lifetime_us, o->zpl_lifetime_sigma_us, Unit::microsecond};
              r.add("tau_total", lum::total_radiative_lifetime(tz, z.fraction_corrected).in(Unit::microsecond),
                    "ZPL lifetime x corrected fraction");
            }
            return r;
          }};
}

Command setup_efficiency(CLI::App& app, Common& c) {
  struct Opt {
    double excited_ns = 0.0, excited_sigma_ns = 0.0, radiative_us = 0.0, radiative_sigma_us = 0.0;
    double zpl_lifetime_us = 0.0, zpl_lifetime_sigma_us = 0.0, fraction = 0.0, fraction_sigma = 0.0;
  };
  auto o = std::make_shared<Opt>();
  auto* sub = app.add_subcommand("efficiency", "Radiative efficiency from excited-state and radiative lifetimes");
  sub->add_option("--excited-ns", o->excited_ns, "Excited-state lifetime (ns)")->required();
  sub->add_option("--excited-sigma-ns", o->excited_sigma_ns, "1-sigma (ns)")->capture_default_str();
  sub->add_option("--radiative-us", o->radiative_us, "Total radiative lifetime (us)");
  sub->add_option("--radiative-sigma-us", o->radiative_sigma_us, "1-sigma (us)")->capture_default_str();
  sub->add_option("--zpl-lifetime-us", o->zpl_lifetime_us, "ZPL radiative lifetime, used with --zpl-fraction");
  sub->add_option("--zpl-lifetime-sigma-us", o->zpl_lifetime_sigma_us, "1-sigma (us)")->capture_default_str();
  sub->add_option("--zpl-fraction", o->fraction, "ZPL fraction (0-1)");
  sub->add_option("--zpl-fraction-sigma", o->fraction_sigma, "1-sigma on the fraction")->capture_default_str();
  add_common(sub, c);
  return {sub, [o](const Common&) {
            Report r("efficiency");
            Quantity rad;
            if (o->radiative_us > 0.0) {
              rad = Quantity{o->radiative_us, o->radiative_sigma_us, Unit::microsecond};
            } else if (o->zpl_lifetime_us > 0.0 && o->fraction > 0.0) {
              rad = lum::total_radiative_lifetime(Quantity{o->zpl_lifetime_us, o->zpl_lifetime_sigma_us, Unit::microsecond},
                                                  Quantity{o->fraction, o->fraction_sigma, Unit::dimensionless});
            } else {
              throw ValidationError("give --radiative-us, or --zpl-lifetime-us with --zpl-fraction");
            }
            const auto e = lum::radiative_efficiency(Quantity{o->excited_ns, o->excited_sigma_ns, Unit::nanosecond}, rad);
            r.add("tau_excited", e.excited_state_lifetime.in(Unit::nanosecond));
            r.add("tau_radiative", e.total_radiative_lifetime.in(Unit::microsecond));
            r.add("efficiency", e.radiative_efficiency.in(Unit::percent));
            return r;
          }};
}

// ---------------------------------------------------------------- lifetime

mod::FitMode parse_mode(const std::string& s) {
  if (s == "amplitude") return mod::FitMode::amplitude;
  if (s == "phase") return mod::FitMode::phase;
  if (s == "joint") return mod::FitMode::joint;
  throw ValidationError("--mode must be amplitude, phase or joint");
}

Command setup_lifetime(CLI::App& app, Common& c) {
  struct Opt {
    std::vector<std::string> data;
    std::string mode = "joint";
    bool phase_offset = false;
  };
  auto o = std::make_shared<Opt>();
  auto* sub = app.add_subcommand("lifetime", "Excited-state lifetime from a modulation-frequency sweep");
  sub->add_option("--data", o->data, "CSV frequency_Hz,amplitude,phase_deg[,ref_amplitude,ref_phase_deg]; repeat to average")->required();
  sub->add_option("--mode", o->mode, "amplitude | phase | joint")->capture_default_str();
  sub->add_flag("--phase-offset", o->phase_offset, "Fit a constant phase offset");
  add_common(sub, c);
  return {sub, [o](const Common& c) {
            Report r("lifetime");
            std::vector<mod::ModulationDataset> sets;
            for (const auto& p : o->data) {
              auto d = io::read_modulation(p);
              r.input(p);
              sets.push_back(d.has_reference() ? mod::correct_instrument(d) : d);
            }
            const mod::ModulationDataset d = sets.size() == 1 ? sets.front() : mod::average_datasets(sets);
            const auto res = mod::fit_lifetime(d, parse_mode(o->mode), o->phase_offset);
            r.add_text("mode", o->mode);
            r.add("datasets", static_cast<double>(sets.size()), 0.0, "1");
            r.add("t1", res.t1.in(Unit::nanosecond));
            r.add("critical_frequency", res.critical_frequency.in(Unit::megahertz), "1/(2 pi t1)");
            r.add("linewidth", res.homogeneous_linewidth, "lifetime limited");
            r.add("amplitude_scale", res.amplitude_scale, 0.0, "1");
            if (res.phase_offset) r.add("phase_offset", *res.phase_offset);
            r.add("hole_burning_bound", mod::hole_burning_linewidth_cm, 0.0, "cm^-1");
            r.add_text("linewidth_below_bound", yes_no(res.homogeneous_linewidth.value() <= mod::hole_burning_linewidth_cm));
            for (const auto& w : res.warnings) r.warn(w);
            io::Table t{{"frequency_Hz", "amplitude", "phase_deg", "model_amplitude", "model_phase_deg"},
                        {d.frequency_hz, d.amplitude, d.phase_deg, {}, {}}};
            const double off = res.phase_offset ? res.phase_offset->value() : 0.0;
            for (double f : d.frequency_hz) {
              const auto m = mod::response_model(f, res.t1.value());
              t.columns[3].push_back(res.amplitude_scale * m.amplitude);
              t.columns[4].push_back(m.phase_deg + off);
            }
            write_plot(c, t, r);
            return r;
          }};
}

// ---------------------------------------------------------------- raman

Command setup_raman(CLI::App& app, Common& c) {
  struct Opt {
    std::vector<double> lasers;
    std::vector<std::string> spectra, compare;
    std::string expect;
    double tolerance = raman::default_tolerance_cm, prominence = 0.1, resolution = 0.0;
  };
  auto o = std::make_shared<Opt>();
  auto* sub = app.add_subcommand("raman", "Classify features as Raman-shifted or stationary across laser energies");
  sub->add_option("--laser", o->lasers, "Laser energy (cm^-1), one per --spectrum, same order")->required();
  sub->add_option("--spectrum", o->spectra, "Spectrum CSV, one per --laser")->required();
  sub->add_option("--tolerance", o->tolerance, "Match tolerance (cm^-1)")->capture_default_str();
  sub->add_option("--min-prominence", o->prominence, "Peak prominence threshold")->capture_default_str();
  sub->add_option("--resolution", o->resolution, "Resolution (cm^-1); 0 = sample spacing")->capture_default_str();
  sub->add_option("--expect", o->expect, "Comma-separated Raman offsets for null search (cm^-1)");
  sub->add_option("--compare", o->compare, "offset:sigma reference to test against the tracks; repeatable");
  add_common(sub, c);
  return {sub, [o](const Common& c) {
            Report r("raman");
            if (o->lasers.size() != o->spectra.size()) throw ValidationError("need one --laser per --spectrum");
            raman::RamanSession s;
            s.laser_cm = o->lasers;
            s.match_tolerance = o->tolerance;
            for (const auto& p : o->spectra) s.spectra.push_back(load_spectrum(p, SpectrumKind::luminescence, o->resolution, r));
            const auto tracks = raman::track_features(s, o->prominence);
            io::Table t{{"track", "class", "matched", "offset_cm-1", "position_cm-1"}, std::vector<std::vector<double>>(5)};
            std::vector<raman::FeatureTrack> ramans;
            std::size_t k = 0;
            for (const auto& tr : tracks) {
              if (tr.matched() < 2) continue;  // singletons are not reported one by one
              const std::string key = "track" + std::to_string(++k);
              r.add_text(key + ".class", std::string(raman::class_name(tr.classification)));
              r.add(key + ".matched", static_cast<double>(tr.matched()), 0.0, "1");
              if (tr.classification == raman::FeatureClass::raman) {
                r.add(key + ".offset", raman::mean_offset(tr), "laser - feature, standard error");
                ramans.push_back(tr);
              } else {
                r.add(key + ".position", tr.position_mean, tr.position_std / std::sqrt(static_cast<double>(tr.matched())), "cm^-1");
              }
              t.columns[0].push_back(static_cast<double>(k));
              t.columns[1].push_back(static_cast<double>(tr.classification));
              t.columns[2].push_back(static_cast<double>(tr.matched()));
              t.columns[3].push_back(tr.offset_mean);
              t.columns[4].push_back(tr.position_mean);
            }
            const auto singletons = std::count_if(tracks.begin(), tracks.end(), [](const auto& tr) { return tr.matched() < 2; });
            r.add("unmatched_peaks", static_cast<double>(singletons), 0.0, "1");
            for (const auto& cmp : o->compare) {
              const auto v = split_numbers(cmp, ':', "--compare");
              if (v.size() != 2) throw ValidationError("--compare expects offset:sigma");
              const Quantity ref{v[0], v[1], Unit::wavenumber};
              const raman::FeatureTrack* best = nullptr;
              for (const auto& tr : ramans)
                if (!best || std::abs(tr.offset_mean - v[0]) < std::abs(best->offset_mean - v[0])) best = &tr;
              const std::string key = "compare." + format_value(v[0]);
              if (!best) {
                r.add_text(key + ".agrees", "false");
                continue;
              }
              // Positions are quoted to the match tolerance, so the measured
              // side carries at least that much uncertainty.
              const Quantity m = raman::mean_offset(*best);
              const Quantity meas{m.value(), std::max(m.uncertainty(), o->tolerance), Unit::wavenumber};
              r.add(key + ".measured", meas);
              r.add_text(key + ".agrees", yes_no(agrees(meas, ref)));
            }
            if (!o->expect.empty()) {
              const auto expected = split_numbers(o->expect, ',', "--expect");
              for (const auto& e : raman::null_search(s, expected, o->prominence)) {
                const std::string key = "null." + format_value(e.expected_offset);
                r.add_text(key + ".detected", yes_no(e.detected));
                r.add_text(key + ".out_of_window", yes_no(e.out_of_window));
                if (e.matched_offset) r.add(key + ".matched_offset", *e.matched_offset, 0.0, "cm^-1");
              }
            }
            write_plot(c, t, r);
            return r;
          }};
}

// ---------------------------------------------------------------- cooperativity

Command setup_cooperativity(CLI::App& app, Common& c) {
  struct Opt {
    double mu = 1.96, linewidth = mod::hole_burning_linewidth_cm, q = 1.5e4, volume = 1.0, wavelength_um = 2.9;
    double n = absorption::silicon_refractive_index, target = 1.0;
    bool measured = false;
  };
  auto o = std::make_shared<Opt>();
  auto* sub = app.add_subcommand("cooperativity", "Single-emitter cavity cooperativity estimate");
  sub->add_option("--mu-debye", o->mu, "Transition dipole (D)")->capture_default_str();
  auto* lw = sub->add_option("--linewidth-cm", o->linewidth, "Emitter linewidth (cm^-1)")->capture_default_str();
  sub->add_flag("--measured-linewidth", o->measured, "Use the lifetime-limited 0.00069 cm^-1 instead")->excludes(lw);
  sub->add_option("--q", o->q, "Cavity quality factor")->capture_default_str();
  sub->add_option("--volume", o->volume, "Mode volume in units of (lambda/n)^3")->capture_default_str();
  sub->add_option("--wavelength-um", o->wavelength_um, "Vacuum wavelength (um)")->capture_default_str();
  sub->add_option("--n", o->n, "Refractive index")->capture_default_str();
  sub->add_option("--target-c", o->target, "Cooperativity for the threshold-Q output")->capture_default_str();
  add_common(sub, c);
  return {sub, [o](const Common&) {
            Report r("cooperativity");
            const double lwv = o->measured ? 0.00069 : o->linewidth;
            const cavity::CavitySpec cav{o->q, o->volume, o->wavelength_um * 1e-6, o->n};
            const auto res = cavity::cooperativity(o->mu, lwv, cav);
            r.add("mu", o->mu, 0.0, "D");
            r.add("linewidth", lwv, 0.0, "cm^-1", o->measured ? "lifetime limited" : "hole-burning upper bound");
            r.add("Q", o->q, 0.0, "1");
            r.add("V", cav.absolute_volume_m3(), 0.0, "m^3");
            r.add("g", res.g);
            r.add("kappa", res.kappa);
            r.add("gamma", res.gamma);
            r.add("C", res.cooperativity);
            r.add("threshold_Q", cavity::threshold_q(o->mu, lwv, cav, o->target), "for C = " + format_value(o->target));
            r.note("rates are angular frequencies; host screening enters as n^2 in g with no local-field factor");
            return r;
          }};
}

// ---------------------------------------------------------------- synth

Command setup_synth(CLI::App& app, Common& c) {
  struct Opt {
    std::string target, grid, out;
    std::uint64_t seed = 0;
    double sigma = 0.0;
    std::vector<std::string> params;
  };
  auto o = std::make_shared<Opt>();
  auto* sub = app.add_subcommand("synth", "Seeded synthetic datasets with a ground-truth sidecar");
  sub->add_option("--target", o->target, "relaxation | decay | spectrum | absorption | modulation | raman")->required();
  sub->add_option("--seed", o->seed, "RNG seed")->capture_default_str();
  sub->add_option("--sigma", o->sigma, "Noise level; 0 = noiseless")->capture_default_str();
  sub->add_option("--param", o->params, "Ground-truth override key=value; repeatable");
  sub->add_option("--grid", o->grid, "Axis lo:hi:step");
  sub->add_option("--out", o->out, "Output CSV path")->required();
  add_common(sub, c);
  return {sub, [o](const Common&) {
            Report r("synth");
            synth::SynthConfig cfg;
            cfg.seed = o->seed;
            cfg.sigma = o->sigma;
            for (const auto& kv : o->params) {
              const auto eq = kv.find('=');
              if (eq == std::string::npos) throw ValidationError("--param expects key=value, got '" + kv + "'");
              const auto v = split_numbers(kv.substr(eq + 1), ',', "--param " + kv.substr(0, eq));
              if (v.size() != 1) throw ValidationError("--param " + kv + " must have one value");
              cfg.params[kv.substr(0, eq)] = v[0];
            }
            if (!o->grid.empty()) {
              const auto g = split_numbers(o->grid, ':', "--grid");
              if (g.size() != 3) throw ValidationError("--grid expects lo:hi:step");
              cfg.grid = synth::Grid{g[0], g[1], g[2]};
            }
            const auto target = synth::parse_target(o->target);
            const auto paths = synth::write(synth::generate(target, cfg), cfg, o->out);
            r.add_text("target", o->target);
            r.add_text("rng", std::string(synth::rng_algorithm));
            r.add("seed", static_cast<double>(o->seed), 0.0, "1");
            r.add("sigma", o->sigma, 0.0, "1");
            for (std::size_t i = 0; i < paths.size(); ++i)
              r.add_text("file" + std::to_string(i + 1), paths[i].string() + " sha256:" + sha256_file(paths[i]));
            return r;
          }};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spin-photon interface analysis for donor qubits in silicon", "sepi"};
  app.set_version_flag("--version", SEPI_VERSION);
  app.require_subcommand(1, 1);
  Common common;
  std::vector<Command> cmds;
  cmds.push_back(setup_levels(app, common));
  cmds.push_back(setup_t1_fit(app, common));
  cmds.push_back(setup_t1_predict(app, common));
  cmds.push_back(setup_absorption(app, common));
  cmds.push_back(setup_zpl(app, common));
  cmds.push_back(setup_efficiency(app, common));
  cmds.push_back(setup_lifetime(app, common));
  cmds.push_back(setup_raman(app, common));
  cmds.push_back(setup_cooperativity(app, common));
  cmds.push_back(setup_synth(app, common));

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << SEPI_VERSION << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    err << "run 'sepi --help' for the list of subcommands\n";
    return 2;
  }

  try {
    for (const auto& cmd : cmds) {
      if (!cmd.app->parsed()) continue;
      const Report r = cmd.run(common);
      out << (common.json ? r.json() : r.text());
      if (!common.report_file.empty()) {
        std::ofstream f(common.report_file, std::ios::binary);
        if (!f) throw ValidationError("cannot write file: " + common.report_file);
        f << r.json();
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "error: " << msg << "\n";
    return 1;
  }
  return 2;
}

}  // namespace sepi::cli
