#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

namespace sepi::fit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Maps parameters to the (unweighted) residual vector.
using ResidualFn = std::function<Vector(const Vector&)>;

struct Bounds {
  Vector lower;
  Vector upper;
};

struct FitProblem {
  ResidualFn residual;
  Vector initial;
  std::optional<Bounds> bounds;
  Vector weights;  // per residual, >= 0; empty means unit weights

  void validate(Eigen::Index residual_size) const;
};

struct FitConfig {
  double ftol = 1e-10;  // relative chi-square change
  double xtol = 1e-10;  // relative step norm
  int max_iter = 200;
  double initial_lambda = 1e-3;
};

struct FitResult {
  Vector params;
  Matrix covariance;  // chi2/(n-k) (J^T W J)^-1
  double chi_square = 0.0;
  bool converged = false;
  int iterations = 0;
  Eigen::Index dof = 0;

  double sigma(Eigen::Index i) const;
};

/// Damped Gauss-Newton (Levenberg-Marquardt) with projected bounds.
/// Throws RankDeficient, NonFiniteResidual or ValidationError.
FitResult solve(const FitProblem& problem, const FitConfig& config = {});

/// Central differences with step max(1e-6 |p|, 1e-8) on the unweighted residual.
Matrix numerical_jacobian(const ResidualFn& residual, const Vector& params);

struct JacobianCheck {
  double max_relative_deviation = 0.0;   // over columns with non-zero sensitivity
  std::vector<Eigen::Index> flat_columns;
};

/// Compares numerical_jacobian against Ridders-extrapolated central
/// differences with an adaptively shrinking step.
JacobianCheck jacobian_check(const FitProblem& problem, const Vector& params);

}  // namespace sepi::fit
