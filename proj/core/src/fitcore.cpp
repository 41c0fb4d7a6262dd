#include "sepi/fitcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sepi/errors.hpp"

namespace sepi::fit {

namespace {

bool all_finite(const Vector& v) { return v.allFinite(); }

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

Vector sqrt_weights(const FitProblem& p, Eigen::Index n) {
  if (p.weights.size() == 0) return Vector::Ones(n);
  return p.weights.cwiseSqrt();
}

Vector project(const FitProblem& p, Vector x) {
  if (!p.bounds) return x;
  return x.cwiseMax(p.bounds->lower).cwiseMin(p.bounds->upper);
}

void check_rank(const Matrix& jtj) {
  const Eigen::SelfAdjointEigenSolver<Matrix> es(jtj, Eigen::EigenvaluesOnly);
  const Vector ev = es.eigenvalues();
  const double top = ev.cwiseAbs().maxCoeff();
  if (!(top > 0.0) || ev.minCoeff() <= 1e-13 * top) {
    throw RankDeficient("normal matrix is singular; parameters are not jointly identifiable");
  }
}

}  // namespace

void FitProblem::validate(Eigen::Index residual_size) const {
  if (!residual) throw ValidationError("fit problem has no residual function");
  if (initial.size() == 0) throw ValidationError("fit problem has no parameters");
  if (residual_size < initial.size()) {
    throw ValidationError("residual dimension " + std::to_string(residual_size) +
                          " is smaller than parameter count " + std::to_string(initial.size()));
  }
  if (weights.size() != 0) {
    if (weights.size() != residual_size) throw ValidationError("weights length must match residual length");
    if ((weights.array() < 0.0).any() || !weights.allFinite()) throw ValidationError("weights must be finite and >= 0");
  }
  if (bounds) {
    if (bounds->lower.size() != initial.size() || bounds->upper.size() != initial.size())
      throw ValidationError("bounds length must match parameter count");
    for (Eigen::Index i = 0; i < initial.size(); ++i)
      if (!(bounds->lower[i] <= initial[i] && initial[i] <= bounds->upper[i]))
        throw ValidationError("initial parameter " + std::to_string(i) + " lies outside its bounds");
  }
}

double FitResult::sigma(Eigen::Index i) const { return std::sqrt(std::max(0.0, covariance(i, i))); }

Matrix numerical_jacobian(const ResidualFn& residual, const Vector& params) {
  const Eigen::Index k = params.size();
  Matrix jac;
  for (Eigen::Index j = 0; j < k; ++j) {
    const double h = std::max(1e-6 * std::abs(params[j]), 1e-8);
    Vector up = params, dn = params;
    up[j] += h;
    dn[j] -= h;
    const Vector col = (residual(up) - residual(dn)) / (2.0 * h);
    if (j == 0) jac.resize(col.size(), k);
    jac.col(j) = col;
  }
  return jac;
}

FitResult solve(const FitProblem& problem, const FitConfig& config) {
  if (!problem.residual) throw ValidationError("fit problem has no residual function");
  Vector p = problem.initial;
  Vector r0 = problem.residual(p);
  problem.validate(r0.size());
  if (!all_finite(r0)) throw ValidationError("residual is not finite at the initial parameters");

  const Eigen::Index n = r0.size();
  const Eigen::Index k = p.size();
  const Vector sw = sqrt_weights(problem, n);
  auto weighted = [&](const Vector& x) -> Vector { return problem.residual(x).cwiseProduct(sw); };

  Vector r = r0.cwiseProduct(sw);
  double chi2 = r.squaredNorm();
  double lambda = config.initial_lambda;

  auto jacobian = [&](const Vector& x) {
    Matrix j = numerical_jacobian(weighted, x);
    if (!j.allFinite()) throw NonFiniteResidual("non-finite Jacobian during fit", to_std(x));
    return j;
  };

  Matrix jac = jacobian(p);
  Matrix jtj = jac.transpose() * jac;
  check_rank(jtj);

  FitResult res;
  constexpr double kZeroChi2 = 1e-300;
  bool converged = chi2 <= kZeroChi2;
  int it = 0;
  while (!converged && it < config.max_iter) {
    ++it;
    const Vector g = jac.transpose() * r;
    bool accepted = false;
    while (!accepted) {
      Matrix a = jtj;
      a.diagonal() += lambda * jtj.diagonal();
      const Vector step = a.ldlt().solve(-g);
      const Vector trial = project(problem, p + step);
      const double step_norm = (trial - p).norm() / (p.norm() + config.xtol);
      const Vector rt = weighted(trial);
      const double chi2_trial = all_finite(rt) ? rt.squaredNorm() : std::numeric_limits<double>::infinity();

      if (chi2_trial < chi2) {
        const double rel = (chi2 - chi2_trial) / chi2;
        p = trial;
        r = rt;
        chi2 = chi2_trial;
        lambda = std::max(lambda / 10.0, 1e-12);
        jac = jacobian(p);
        jtj = jac.transpose() * jac;
        accepted = true;
        if (rel < config.ftol || step_norm < config.xtol || chi2 <= kZeroChi2) converged = true;
      } else {
        if (step_norm < config.xtol) {
          converged = true;
          break;
        }
        lambda *= 10.0;
        if (lambda > 1e20) {
          if (!std::isfinite(chi2_trial))
            throw NonFiniteResidual("residual became non-finite during fit", to_std(p));
          break;
        }
      }
    }
    if (!accepted && !converged) break;
  }

  check_rank(jtj);
  res.params = p;
  res.chi_square = chi2;
  res.converged = converged;
  res.iterations = it;
  res.dof = n - k;
  const double scale = res.dof > 0 ? chi2 / static_cast<double>(res.dof) : 0.0;
  Matrix cov = jtj.ldlt().solve(Matrix::Identity(k, k)) * scale;
  res.covariance = 0.5 * (cov + cov.transpose());
  return res;
}

JacobianCheck jacobian_check(const FitProblem& problem, const Vector& params) {
  const Matrix internal = numerical_jacobian(problem.residual, params);
  const Eigen::Index n = internal.rows();
  const Eigen::Index k = internal.cols();

  // Ridders: Neville tableau of central differences, step shrinking by 1.4.
  constexpr int kTable = 10;
  constexpr double kShrink = 1.4;
  constexpr double kShrink2 = kShrink * kShrink;
  Matrix reference(n, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    auto central = [&](double h) {
      Vector up = params, dn = params;
      up[j] += h;
      dn[j] -= h;
      return Vector((problem.residual(up) - problem.residual(dn)) / (2.0 * h));
    };
    double h = 0.1 * std::max(std::abs(params[j]), 1e-3);
    std::vector<std::vector<Vector>> tab(kTable, std::vector<Vector>(kTable));
    tab[0][0] = central(h);
    Vector best = tab[0][0];
    double best_err = std::numeric_limits<double>::infinity();
    for (int i = 1; i < kTable; ++i) {
      h /= kShrink;
      tab[0][i] = central(h);
      double fac = kShrink2;
      for (int m = 1; m <= i; ++m) {
        tab[m][i] = (tab[m - 1][i] * fac - tab[m - 1][i - 1]) / (fac - 1.0);
        fac *= kShrink2;
        const double err = std::max((tab[m][i] - tab[m - 1][i]).cwiseAbs().maxCoeff(),
                                    (tab[m][i] - tab[m - 1][i - 1]).cwiseAbs().maxCoeff());
        if (err <= best_err) {
          best_err = err;
          best = tab[m][i];
        }
      }
      if ((tab[i][i] - tab[i - 1][i - 1]).cwiseAbs().maxCoeff() >= 2.0 * best_err) break;
    }
    reference.col(j) = best;
  }

  JacobianCheck out;
  const double global = std::max(reference.cwiseAbs().maxCoeff(), 1e-300);
  for (Eigen::Index j = 0; j < k; ++j) {
    const double col_scale = reference.col(j).cwiseAbs().maxCoeff();
    if (col_scale <= 1e-14 * global) {
      out.flat_columns.push_back(j);
      continue;
    }
    const double dev = (internal.col(j) - reference.col(j)).cwiseAbs().maxCoeff() / col_scale;
    out.max_relative_deviation = std::max(out.max_relative_deviation, dev);
  }
  return out;
}

}  // namespace sepi::fit
