#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sepi {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition or argument violation.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class IncompatibleUnits : public Error {
 public:
  using Error::Error;
};

/// Bad input data; `index` points at the offending sample when known.
class DataError : public Error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  explicit DataError(const std::string& what, std::size_t index = npos)
      : Error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class BoundsError : public Error {
 public:
  using Error::Error;
};

/// Residual became non-finite during iteration.
class NonFiniteResidual : public Error {
 public:
  NonFiniteResidual(const std::string& what, std::vector<double> last_params)
      : Error(what), last_params_(std::move(last_params)) {}
  const std::vector<double>& last_valid_params() const noexcept { return last_params_; }

 private:
  std::vector<double> last_params_;
};

class RankDeficient : public Error {
 public:
  using Error::Error;
};

/// A fit converged to a physically meaningless value (e.g. T1 <= 0).
class FitDegenerate : public Error {
 public:
  using Error::Error;
};

class ClassificationError : public Error {
 public:
  using Error::Error;
};

class UnphysicalEfficiency : public Error {
 public:
  using Error::Error;
};

}  // namespace sepi
