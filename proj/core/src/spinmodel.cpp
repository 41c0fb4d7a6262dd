#include "sepi/spinmodel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sepi/errors.hpp"

namespace sepi::spin {

namespace {

constexpr std::size_t N = SpinMatrix::dim;
constexpr double kHermitianTol = 1e-12;

using Overlaps = std::array<std::array<double, 4>, 4>;  // [eigen index][label]

constexpr std::array<Level, 4> kLabelOrder{Level::singlet, Level::triplet_minus, Level::triplet_zero,
                                           Level::triplet_plus};

double overlap2(const StateVector& a, const StateVector& b) {
  Complex s{};
  for (std::size_t i = 0; i < N; ++i) s += std::conj(a[i]) * b[i];
  return std::norm(s);
}

// Best assignment of eigenvectors to labels under the given overlap table.
// Strict improvement keeps the first permutation on ties, so results are
// deterministic.
std::array<Level, 4> assign_labels(const Overlaps& o) {
  std::array<std::size_t, 4> perm{0, 1, 2, 3};
  std::array<std::size_t, 4> best = perm;
  double best_score = -1.0;
  do {
    double score = 0.0;
    for (std::size_t k = 0; k < N; ++k) score += o[k][perm[k]];
    if (score > best_score + 1e-12) {
      best_score = score;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::array<Level, 4> labels{};
  for (std::size_t k = 0; k < N; ++k) labels[k] = kLabelOrder[best[k]];
  return labels;
}

std::array<Level, 4> label_against(const LevelSet& ls, const std::array<StateVector, 4>& refs) {
  Overlaps o{};
  for (std::size_t k = 0; k < N; ++k)
    for (std::size_t l = 0; l < N; ++l) o[k][l] = overlap2(refs[l], ls.vectors[k]);
  return assign_labels(o);
}

std::array<StateVector, 4> zero_field_refs() {
  std::array<StateVector, 4> refs{};
  for (std::size_t l = 0; l < N; ++l) refs[l] = zero_field_state(kLabelOrder[l]);
  return refs;
}

std::size_t label_index(Level l) {
  return static_cast<std::size_t>(std::find(kLabelOrder.begin(), kLabelOrder.end(), l) - kLabelOrder.begin());
}

}  // namespace

void SpinSystem::validate() const {
  if (!(g_e > 0.0)) throw ValidationError("electron g-factor must be positive");
  if (!std::isfinite(g_n) || !std::isfinite(hyperfine_hz)) throw ValidationError("non-finite spin parameter");
  if (!(field_t >= 0.0)) throw ValidationError("static field must be >= 0 T");
}

Complex SpinMatrix::trace() const {
  Complex t{};
  for (std::size_t i = 0; i < dim; ++i) t += (*this)(i, i);
  return t;
}

double SpinMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

double SpinMatrix::hermiticity_defect() const {
  const double scale = max_abs();
  if (scale == 0.0) return 0.0;
  double d = 0.0;
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return d / scale;
}

SpinMatrix SpinMatrix::operator+(const SpinMatrix& o) const {
  SpinMatrix r;
  for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = data_[k] + o.data_[k];
  return r;
}

SpinMatrix SpinMatrix::operator*(const SpinMatrix& o) const {
  SpinMatrix r;
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      Complex s{};
      for (std::size_t k = 0; k < dim; ++k) s += (*this)(i, k) * o(k, j);
      r(i, j) = s;
    }
  return r;
}

SpinMatrix SpinMatrix::scaled(Complex s) const {
  SpinMatrix r;
  for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = data_[k] * s;
  return r;
}

SpinMatrix SpinMatrix::adjoint() const {
  SpinMatrix r;
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) r(i, j) = std::conj((*this)(j, i));
  return r;
}

SpinMatrix SpinMatrix::identity() {
  SpinMatrix r;
  for (std::size_t i = 0; i < dim; ++i) r(i, i) = 1.0;
  return r;
}

SpinMatrix SpinMatrix::s_dot_i() {
  // Sz Iz + (S+ I- + S- I+) / 2
  SpinMatrix r;
  r(0, 0) = 0.25;
  r(1, 1) = -0.25;
  r(2, 2) = -0.25;
  r(3, 3) = 0.25;
  r(1, 2) = 0.5;
  r(2, 1) = 0.5;
  return r;
}

SpinMatrix SpinMatrix::s_z() {
  SpinMatrix r;
  r(0, 0) = 0.5;
  r(1, 1) = 0.5;
  r(2, 2) = -0.5;
  r(3, 3) = -0.5;
  return r;
}

SpinMatrix SpinMatrix::i_z() {
  SpinMatrix r;
  r(0, 0) = 0.5;
  r(1, 1) = -0.5;
  r(2, 2) = 0.5;
  r(3, 3) = -0.5;
  return r;
}

std::string_view level_name(Level l) noexcept {
  switch (l) {
    case Level::singlet: return "S0";
    case Level::triplet_minus: return "T-";
    case Level::triplet_zero: return "T0";
    case Level::triplet_plus: return "T+";
  }
  return "?";
}

std::optional<Level> parse_level(std::string_view s) noexcept {
  for (Level l : kLabelOrder)
    if (level_name(l) == s) return l;
  return std::nullopt;
}

double LevelSet::energy(Level l) const {
  for (std::size_t k = 0; k < N; ++k)
    if (labels[k] == l) return energies[k];
  throw ValidationError("level not present in level set");
}

const StateVector& LevelSet::vector(Level l) const {
  for (std::size_t k = 0; k < N; ++k)
    if (labels[k] == l) return vectors[k];
  throw ValidationError("level not present in level set");
}

StateVector zero_field_state(Level l) {
  const double r = 1.0 / std::sqrt(2.0);
  switch (l) {
    case Level::singlet: return {0.0, r, -r, 0.0};
    case Level::triplet_zero: return {0.0, r, r, 0.0};
    case Level::triplet_plus: return {1.0, 0.0, 0.0, 0.0};
    case Level::triplet_minus: return {0.0, 0.0, 0.0, 1.0};
  }
  return {};
}

SpinMatrix hamiltonian_at(const SpinSystem& sys, double field_t) {
  const double electron = sys.g_e * constants::mu_b / constants::h * field_t;
  const double nuclear = sys.g_n * constants::mu_n / constants::h * field_t;
  return SpinMatrix::s_z().scaled(electron) + SpinMatrix::i_z().scaled(-nuclear) +
         SpinMatrix::s_dot_i().scaled(sys.hyperfine_hz);
}

SpinMatrix build_hamiltonian(const SpinSystem& sys) {
  sys.validate();
  return hamiltonian_at(sys, sys.field_t);
}

LevelSet eigensolve(const SpinMatrix& m) {
  if (m.hermiticity_defect() > kHermitianTol) {
    throw ValidationError("eigensolve requires a Hermitian matrix (defect " +
                          std::to_string(m.hermiticity_defect()) + ")");
  }
  SpinMatrix a = m;
  SpinMatrix v = SpinMatrix::identity();
  const double scale = std::max(m.max_abs(), 1e-300);

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < N; ++p)
      for (std::size_t q = p + 1; q < N; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) <= 1e-17 * scale) break;

    for (std::size_t p = 0; p < N; ++p) {
      for (std::size_t q = p + 1; q < N; ++q) {
        const double r = std::abs(a(p, q));
        if (r <= 1e-300) continue;
        // Phase rotation makes a(p,q) real, then a real Jacobi rotation zeroes it.
        const Complex phase = a(p, q) / r;
        const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * r);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        SpinMatrix j = SpinMatrix::identity();
        j(p, p) = c;
        j(p, q) = s;
        j(q, p) = -s * std::conj(phase);
        j(q, q) = c * std::conj(phase);
        a = j.adjoint() * a * j;
        v = v * j;
        // Clean the annihilated pair and keep the diagonal exactly real.
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }

  std::array<std::size_t, 4> order{0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

  LevelSet out;
  for (std::size_t k = 0; k < N; ++k) {
    const std::size_t src = order[k];
    out.energies[k] = a(src, src).real();
    StateVector vec{};
    std::size_t big = 0;
    for (std::size_t i = 0; i < N; ++i) {
      vec[i] = v(i, src);
      if (std::abs(vec[i]) > std::abs(vec[big])) big = i;
    }
    // Fix the global phase: largest component real and positive.
    const Complex ph = std::abs(vec[big]) > 0.0 ? std::conj(vec[big]) / std::abs(vec[big]) : Complex{1.0};
    for (auto& z : vec) z *= ph;
    out.vectors[k] = vec;
  }
  out.labels = label_against(out, zero_field_refs());
  return out;
}

std::vector<LevelSet> track_levels(const SpinSystem& sys, std::span<const double> fields) {
  std::vector<LevelSet> out;
  out.reserve(fields.size());
  std::array<StateVector, 4> refs = zero_field_refs();
  for (double b : fields) {
    LevelSet ls = eigensolve(hamiltonian_at(sys, b));
    ls.labels = label_against(ls, refs);
    for (std::size_t k = 0; k < N; ++k) refs[label_index(ls.labels[k])] = ls.vectors[k];
    out.push_back(ls);
  }
  return out;
}

Quantity transition_frequency(const LevelSet& levels, Level from, Level to) {
  if (from == to) throw ValidationError("transition needs two distinct levels");
  return {std::abs(levels.energy(to) - levels.energy(from)), 0.0, Unit::hertz};
}

Quantity clock_transition_slope(const SpinSystem& sys, Level from, Level to, double d_field) {
  sys.validate();
  if (!(d_field > 0.0)) throw ValidationError("finite-difference field step must be positive");
  auto freq = [&](double b) {
    return transition_frequency(eigensolve(hamiltonian_at(sys, b)), from, to).value();
  };
  const double slope = (freq(sys.field_t + d_field) - freq(sys.field_t - d_field)) / (2.0 * d_field);
  return {slope, 0.0, Unit::hertz_per_tesla};
}

}  // namespace sepi::spin
