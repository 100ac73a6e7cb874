#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fogdrip {

/// Invalid user-supplied parameters (chemical potentials, geometry, CLI flags).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// A contour family that violates pairwise compatibility.
class IncompatibleFamily : public std::runtime_error {
 public:
  enum class Rule { kInteriorsOverlap, kOppositeBond };

  IncompatibleFamily(std::size_t first, std::size_t second, Rule rule);

  std::size_t first() const noexcept { return first_; }
  std::size_t second() const noexcept { return second_; }
  Rule rule() const noexcept { return rule_; }

 private:
  std::size_t first_;
  std::size_t second_;
  Rule rule_;
};

/// A computation refused or stopped because of a configured resource budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Incremental chain bookkeeping disagrees with a full recomputation.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The critical droplet does not fit into the box for the requested R.
class FittingConditionError : public std::runtime_error {
 public:
  FittingConditionError(double R, double required_R);

  double R() const noexcept { return R_; }
  double required_R() const noexcept { return required_R_; }

 private:
  double R_;
  double required_R_;
};

}  // namespace fogdrip
