#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "sepi/io.hpp"
#include "sepi/modulation.hpp"
#include "sepi/raman.hpp"
#include "sepi/relaxation.hpp"
#include "sepi/spectra.hpp"

namespace sepi::synth {

inline constexpr std::string_view rng_algorithm = "mt19937_64/box-muller";

/// 64-bit Mersenne Twister with a local Box-Muller transform, so the normal
/// stream does not depend on the standard library's distribution code.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform();  // (0, 1]
  double normal();

 private:
  std::mt19937_64 eng_;
  std::optional<double> spare_;
};

enum class Target { relaxation, decay, spectrum, absorption, modulation, raman };

std::string_view target_name(Target t) noexcept;
Target parse_target(std::string_view s);

/// lo/hi/step along the target's natural axis. Modulation uses Hz bounds and
/// a step in log10 decades.
struct Grid {
  double lo;
  double hi;
  double step;
};

struct SynthConfig {
  std::uint64_t seed = 0;
  double sigma = 0.0;  // 0 = noiseless
  std::optional<Grid> grid;
  std::map<std::string, double> params;

  void validate() const;
  double param(const std::string& key, double fallback) const;
};

// Typed generators. Noise conventions:
//   relaxation  T1 scatter relative to T1, sigma_s column = sigma*T1
//   decay       additive on signal
//   spectrum, absorption, raman  additive on every sample
//   modulation  relative on amplitude and phase, phase kept inside (-90, 0)
std::vector<relax::Point> relaxation_series(const SynthConfig& cfg);
relax::PolarizationDecaySeries decay_series(const SynthConfig& cfg);
spectra::Spectrum line_spectrum(const SynthConfig& cfg);

struct AbsorptionPair {
  spectra::Spectrum sample;
  spectra::Spectrum reference;
  spectra::Spectrum alpha;  // noiseless truth
  double path_cm;
};
AbsorptionPair absorption_pair(const SynthConfig& cfg);

mod::ModulationDataset modulation_sweep(const SynthConfig& cfg);
raman::RamanSession raman_session(const SynthConfig& cfg);

/// Serialisable form: one or more tables plus the ground truth.
struct Dataset {
  Target target;
  std::vector<std::pair<std::string, io::Table>> files;  // suffix, table
  std::map<std::string, double> truth;
  std::map<std::string, std::string> notes;
};

Dataset generate(Target target, const SynthConfig& cfg);

/// Writes every table next to `out` (suffixes inserted before the extension)
/// and a `<stem>.truth.json` sidecar. Returns the paths written.
std::vector<std::filesystem::path> write(const Dataset& d, const SynthConfig& cfg, const std::filesystem::path& out);

std::string sidecar_json(const Dataset& d, const SynthConfig& cfg, const std::vector<std::string>& files);

}  // namespace sepi::synth
