#include "sepi/raman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sepi/errors.hpp"

namespace sepi::raman {

namespace {

struct Stats {
  double mean = 0.0;
  double std = 0.0;
};

Stats stats(const std::vector<double>& v) {
  Stats s;
  if (v.empty()) return s;
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return s;
}

FeatureTrack make_track(const std::vector<double>& lasers, std::vector<std::optional<double>> centers, double tol) {
  FeatureTrack t;
  t.laser_cm = lasers;
  t.centers = std::move(centers);
  std::vector<double> pos, off;
  for (std::size_t s = 0; s < t.centers.size(); ++s) {
    if (!t.centers[s]) continue;
    pos.push_back(*t.centers[s]);
    off.push_back(lasers[s] - *t.centers[s]);
  }
  const Stats p = stats(pos), o = stats(off);
  t.position_mean = p.mean;
  t.position_std = p.std;
  t.offset_mean = o.mean;
  t.offset_std = o.std;
  if (pos.size() < 2) return t;
  const bool raman_ok = o.std <= tol;
  const bool pl_ok = p.std <= tol;
  if (raman_ok && pl_ok) {
    // Both fit only when the lasers barely move; prefer the tighter hypothesis.
    if (o.std < p.std) t.classification = FeatureClass::raman;
    else if (p.std < o.std) t.classification = FeatureClass::photoluminescence;
  } else if (raman_ok) {
    t.classification = FeatureClass::raman;
  } else if (pl_ok) {
    t.classification = FeatureClass::photoluminescence;
  }
  return t;
}

using Members = std::vector<std::optional<std::size_t>>;

struct Candidate {
  Members members;
  FeatureTrack track;
  std::size_t count = 0;
  double score = 0.0;
};

}  // namespace

std::string_view class_name(FeatureClass c) noexcept {
  switch (c) {
    case FeatureClass::raman: return "raman";
    case FeatureClass::photoluminescence: return "photoluminescence";
    case FeatureClass::unclassified: return "unclassified";
  }
  return "?";
}

std::size_t FeatureTrack::matched() const noexcept {
  return static_cast<std::size_t>(std::count_if(centers.begin(), centers.end(), [](const auto& c) { return c.has_value(); }));
}

void RamanSession::validate() const {
  if (spectra.size() < 2) throw ValidationError("Raman session needs at least 2 spectra");
  if (laser_cm.size() != spectra.size()) throw ValidationError("one laser energy is required per spectrum");
  if (!(match_tolerance > 0.0)) throw ValidationError("match tolerance must be positive");
  const auto [mn, mx] = std::minmax_element(laser_cm.begin(), laser_cm.end());
  if (!(*mx > *mn)) throw ValidationError("Raman session needs at least 2 distinct laser energies");
}

std::vector<FeatureTrack> track_features(const RamanSession& session, double min_prominence) {
  session.validate();
  const std::size_t ns = session.spectra.size();
  const double tol = session.match_tolerance;
  const double window = 2.0 * tol;

  std::vector<std::vector<spectra::Peak>> peaks(ns);
  for (std::size_t s = 0; s < ns; ++s) peaks[s] = spectra::find_peaks(session.spectra[s], min_prominence);

  auto nearest = [&](std::size_t s, double target) -> std::optional<std::size_t> {
    std::optional<std::size_t> best;
    double bd = window;
    for (std::size_t j = 0; j < peaks[s].size(); ++j) {
      const double d = std::abs(peaks[s][j].center - target);
      if (d <= bd) bd = d, best = j;
    }
    return best;
  };

  std::vector<Candidate> cands;
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t j = 0; j < peaks[s].size(); ++j) {
      const double c0 = peaks[s][j].center;
      for (bool shifted : {false, true}) {
        Members m(ns);
        m[s] = j;
        for (std::size_t t = 0; t < ns; ++t) {
          if (t == s) continue;
          const double target = shifted ? session.laser_cm[t] - (session.laser_cm[s] - c0) : c0;
          m[t] = nearest(t, target);
        }
        std::vector<std::optional<double>> centers(ns);
        std::size_t count = 0;
        for (std::size_t t = 0; t < ns; ++t)
          if (m[t]) centers[t] = peaks[t][*m[t]].center, ++count;
        FeatureTrack tr = make_track(session.laser_cm, std::move(centers), tol);
        if (count < 2 || tr.classification == FeatureClass::unclassified) continue;
        const double score = tr.classification == FeatureClass::raman ? tr.offset_std : tr.position_std;
        cands.push_back({std::move(m), std::move(tr), count, score});
      }
    }
  }
  std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.score < b.score;
  });

  std::vector<std::vector<bool>> used(ns);
  for (std::size_t s = 0; s < ns; ++s) used[s].assign(peaks[s].size(), false);
  std::vector<FeatureTrack> out;
  for (const Candidate& c : cands) {
    bool free = true;
    for (std::size_t t = 0; t < ns && free; ++t)
      if (c.members[t] && used[t][*c.members[t]]) free = false;
    if (!free) continue;
    for (std::size_t t = 0; t < ns; ++t)
      if (c.members[t]) used[t][*c.members[t]] = true;
    out.push_back(c.track);
  }
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t j = 0; j < peaks[s].size(); ++j) {
      if (used[s][j]) continue;
      std::vector<std::optional<double>> centers(ns);
      centers[s] = peaks[s][j].center;
      out.push_back(make_track(session.laser_cm, std::move(centers), tol));
    }
  }
  return out;
}

Quantity mean_offset(const FeatureTrack& track) {
  if (track.classification != FeatureClass::raman) throw ClassificationError("mean offset requires a raman-classified track");
  std::vector<double> off;
  for (std::size_t s = 0; s < track.centers.size(); ++s)
    if (track.centers[s]) off.push_back(track.laser_cm[s] - *track.centers[s]);
  const Stats st = stats(off);
  return {st.mean, st.std / std::sqrt(static_cast<double>(off.size())), Unit::wavenumber};
}

std::vector<NullSearchEntry> null_search(const RamanSession& session, std::span<const double> expected_offsets,
                                         double min_prominence) {
  const std::vector<FeatureTrack> tracks = track_features(session, min_prominence);
  std::vector<NullSearchEntry> out;
  for (double e : expected_offsets) {
    NullSearchEntry entry{e, false, false, std::nullopt};
    bool in_any = false;
    for (std::size_t s = 0; s < session.spectra.size(); ++s) {
      const double pos = session.laser_cm[s] - e;
      if (pos >= session.spectra[s].lo() && pos <= session.spectra[s].hi()) in_any = true;
    }
    entry.out_of_window = !in_any;
    double best = std::numeric_limits<double>::infinity();
    for (const FeatureTrack& t : tracks) {
      if (t.classification != FeatureClass::raman) continue;
      const double d = std::abs(t.offset_mean - e);
      if (d <= session.match_tolerance && d < best) {
        best = d;
        entry.detected = true;
        entry.matched_offset = t.offset_mean;
      }
    }
    out.push_back(entry);
  }
  return out;
}

}  // namespace sepi::raman
