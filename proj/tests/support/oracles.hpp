#pragma once

// Independent reference computations used by the unit and acceptance tests.
// Nothing here calls into the library under test.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

using C = std::complex<double>;
using Mat4 = std::array<std::array<C, 4>, 4>;

inline constexpr double mu_b = 9.2740100783e-24;
inline constexpr double mu_n = 5.0507837461e-27;
inline constexpr double h = 6.62607015e-34;
inline constexpr double c = 299792458.0;
inline constexpr double eps0 = 8.8541878128e-12;
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double hbar = h / (2.0 * pi);
inline constexpr double debye = 3.33564095198152e-30;

// Contact hyperfine plus Zeeman Hamiltonian written out element by element on |uu>,|ud>,|du>,|dd>.
inline Mat4 hamiltonian(double g_e, double g_n, double a, double b) {
  const double ze = g_e * mu_b * b / h, zn = g_n * mu_n * b / h;
  Mat4 m{};
  m[0][0] = 0.5 * ze - 0.5 * zn + a / 4;
  m[1][1] = 0.5 * ze + 0.5 * zn - a / 4;
  m[2][2] = -0.5 * ze - 0.5 * zn - a / 4;
  m[3][3] = -0.5 * ze + 0.5 * zn + a / 4;
  m[1][2] = m[2][1] = a / 2;
  return m;
}

/// Characteristic polynomial by Faddeev-LeVerrier; c[k] multiplies x^(4-k).
inline std::array<double, 5> charpoly(const Mat4& a) {
  Mat4 mk{};
  std::array<C, 5> co{};
  co[0] = 1.0;
  for (int k = 1; k <= 4; ++k) {
    Mat4 next{};
    // next = A * (M_{k-1} + c_{k-1} I), with M_0 = 0
    Mat4 t = mk;
    for (int i = 0; i < 4; ++i) t[i][i] += co[k - 1];
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int l = 0; l < 4; ++l) next[i][j] += a[i][l] * t[l][j];
    C tr = 0;
    for (int i = 0; i < 4; ++i) tr += next[i][i];
    co[k] = -tr / static_cast<double>(k);
    mk = next;
  }
  return {co[0].real(), co[1].real(), co[2].real(), co[3].real(), co[4].real()};
}

/// Real roots of the characteristic polynomial for a Hermitian matrix with
/// simple eigenvalues: scan for sign changes, then bisect.
inline std::vector<double> eigenvalues(const Mat4& m) {
  double scale = 0.0;
  for (auto& r : m)
    for (auto& e : r) scale = std::max(scale, std::abs(e));
  if (scale == 0.0) return {0, 0, 0, 0};
  Mat4 s = m;
  for (auto& r : s)
    for (auto& e : r) e /= scale;
  const auto co = charpoly(s);
  auto p = [&](double x) { return (((co[0] * x + co[1]) * x + co[2]) * x + co[3]) * x + co[4]; };
  std::vector<double> roots;
  const int n = 400000;
  const double lo = -4.5, hi = 4.5;
  double xa = lo, pa = p(lo);
  for (int i = 1; i <= n; ++i) {
    const double xb = lo + (hi - lo) * i / n, pb = p(xb);
    if (pa == 0.0) roots.push_back(xa);
    else if (pa * pb < 0.0) {
      double l = xa, r = xb, pl = pa;
      for (int it = 0; it < 200 && r - l > 1e-17; ++it) {
        const double mid = 0.5 * (l + r), pm = p(mid);
        if (pm * pl <= 0.0) r = mid;
        else l = mid, pl = pm;
      }
      roots.push_back(0.5 * (l + r));
    }
    xa = xb, pa = pb;
  }
  for (double& r : roots) r *= scale;
  std::sort(roots.begin(), roots.end());
  return roots;
}

/// Composite Simpson over [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double hstep = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * hstep) * (i % 2 ? 4.0 : 2.0);
  return s * hstep / 3.0;
}

inline double gaussian(double x, double center, double fwhm, double area) {
  const double sig = fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  return area / (sig * std::sqrt(2.0 * pi)) * std::exp(-0.5 * std::pow((x - center) / sig, 2));
}

inline double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double stddev(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

inline bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b)); }

}  // namespace oracle
