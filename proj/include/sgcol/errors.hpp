#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sgcol {

/// Caller broke a documented precondition (bad length, non-monotone set, ...).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Invalid user configuration (CLI flags, config files).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical routine failed (non-convergence, overflow, non-finite values).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The user model failed at a parameter point; carries that point.
class ModelError : public NumericalError {
 public:
  ModelError(const std::string& what, std::vector<double> point)
      : NumericalError(what), point_(std::move(point)) {}

  const std::vector<double>& point() const noexcept { return point_; }

 private:
  std::vector<double> point_;
};

}  // namespace sgcol
