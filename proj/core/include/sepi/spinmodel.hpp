#pragma once

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sepi/units.hpp"

namespace sepi::spin {

using Complex = std::complex<double>;

/// Ground-state parameters of a spin-1/2 electron coupled to a spin-1/2
/// nucleus. Defaults describe 77Se+ in silicon.
struct SpinSystem {
  double g_e = 2.0057;
  double g_n = 1.07;
  double hyperfine_hz = 1.66e9;
  double field_t = 0.0;

  void validate() const;
};

/// Dense 4x4 operator on the product basis |mS, mI>, ordered
/// |up,up>, |up,down>, |down,up>, |down,down>. Entries in Hz.
class SpinMatrix {
 public:
  static constexpr std::size_t dim = 4;

  SpinMatrix() { data_.fill(Complex{}); }

  Complex& operator()(std::size_t row, std::size_t col) { return data_[row * dim + col]; }
  const Complex& operator()(std::size_t row, std::size_t col) const { return data_[row * dim + col]; }

  Complex trace() const;
  double max_abs() const;
  /// max |M_ij - conj(M_ji)| relative to max |M_ij|.
  double hermiticity_defect() const;

  SpinMatrix operator+(const SpinMatrix& o) const;
  SpinMatrix operator*(const SpinMatrix& o) const;
  SpinMatrix scaled(Complex s) const;
  SpinMatrix adjoint() const;

  static SpinMatrix identity();
  /// S.I, S_z and I_z building blocks (dimensionless, hbar = 1).
  static SpinMatrix s_dot_i();
  static SpinMatrix s_z();
  static SpinMatrix i_z();

 private:
  std::array<Complex, dim * dim> data_;
};

enum class Level { singlet, triplet_minus, triplet_zero, triplet_plus };

std::string_view level_name(Level l) noexcept;  // "S0", "T-", "T0", "T+"
std::optional<Level> parse_level(std::string_view s) noexcept;

using StateVector = std::array<Complex, 4>;

struct LevelSet {
  std::array<double, 4> energies{};     // Hz, ascending
  std::array<Level, 4> labels{};        // parallel to energies
  std::array<StateVector, 4> vectors{}; // parallel to energies

  double energy(Level l) const;
  const StateVector& vector(Level l) const;
};

/// Zero-field eigenbasis: S0 = (|ud> - |du>)/sqrt2, T0 = (|ud> + |du>)/sqrt2,
/// T+ = |uu>, T- = |dd>.
StateVector zero_field_state(Level l);

SpinMatrix build_hamiltonian(const SpinSystem& sys);

/// Same Hamiltonian at an arbitrary signed field; used for finite differences.
SpinMatrix hamiltonian_at(const SpinSystem& sys, double field_t);

/// Cyclic complex Jacobi diagonalization. Labels are the assignment that
/// maximizes total overlap with the zero-field singlet/triplet basis.
LevelSet eigensolve(const SpinMatrix& m);

/// Follows labels along a field path by maximum overlap with the previous
/// step, starting from the zero-field basis.
std::vector<LevelSet> track_levels(const SpinSystem& sys, std::span<const double> fields);

Quantity transition_frequency(const LevelSet& levels, Level from, Level to);

/// Central finite difference df/dB of a transition at sys.field_t (Hz/T).
Quantity clock_transition_slope(const SpinSystem& sys, Level from, Level to, double d_field);

}  // namespace sepi::spin
