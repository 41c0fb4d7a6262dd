#include <benchmark/benchmark.h>

#include "sepi/modulation.hpp"
#include "sepi/raman.hpp"
#include "sepi/relaxation.hpp"
#include "sepi/spectra.hpp"
#include "sepi/spinmodel.hpp"
#include "sepi/synth.hpp"

using namespace sepi;

static void BM_Eigensolve(benchmark::State& state) {
  const spin::SpinMatrix h = spin::hamiltonian_at(spin::SpinSystem{}, 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(spin::eigensolve(h));
}
BENCHMARK(BM_Eigensolve);

static void BM_TrackLevels(benchmark::State& state) {
  std::vector<double> fields;
  for (int i = 0; i < state.range(0); ++i) fields.push_back(0.5 * i / state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(spin::track_levels(spin::SpinSystem{}, fields));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TrackLevels)->Arg(100)->Arg(1000);

static void BM_RelaxationFit(benchmark::State& state) {
  synth::SynthConfig cfg;
  cfg.sigma = 0.1;
  cfg.seed = 3;
  const auto pts = synth::relaxation_series(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(relax::fit_temperature_model(pts));
}
BENCHMARK(BM_RelaxationFit);

static void BM_LifetimeFit(benchmark::State& state) {
  synth::SynthConfig cfg;
  cfg.sigma = 0.05;
  cfg.seed = 3;
  const auto d = synth::modulation_sweep(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(mod::fit_lifetime(d, mod::FitMode::joint));
}
BENCHMARK(BM_LifetimeFit);

static void BM_FindPeaks(benchmark::State& state) {
  synth::SynthConfig cfg;
  cfg.sigma = 0.002;
  const spectra::Spectrum s = synth::line_spectrum(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(spectra::find_peaks(s, 0.05));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.size()));
}
BENCHMARK(BM_FindPeaks);

static void BM_TrackFeatures(benchmark::State& state) {
  synth::SynthConfig cfg;
  cfg.sigma = 0.01;
  const raman::RamanSession session = synth::raman_session(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(raman::track_features(session, 0.1));
}
BENCHMARK(BM_TrackFeatures);

BENCHMARK_MAIN();
