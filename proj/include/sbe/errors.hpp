#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sbe {

/// Violated precondition or type invariant.
class ContractViolation : public std::invalid_argument {
 public:
  explicit ContractViolation(const std::string& what) : std::invalid_argument(what) {}
};

/// Malformed input file (CSV, IDX, spec JSON).
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

/// A solver produced non-finite centroids.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, std::size_t outer_iteration)
      : std::runtime_error(what), outer_iteration_(outer_iteration) {}

  std::size_t outer_iteration() const noexcept { return outer_iteration_; }

 private:
  std::size_t outer_iteration_;
};

}  // namespace sbe
