#pragma once

#include <stdexcept>
#include <string>

namespace twistmod {

/// Operands live over different base dimensions.
struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// An operand violates a degree or homogeneity precondition.
struct DegreeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Malformed input file (bad JSON, unknown basis name, inconsistent data).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An operation whose contract requires the structure equation was invoked
/// on data that fails it.  `defect` carries a printable witness.
struct TwistedConditionError : std::runtime_error {
  std::string defect;
  TwistedConditionError(const std::string& msg, std::string defect_terms)
      : std::runtime_error(msg), defect(std::move(defect_terms)) {}
};

}  // namespace twistmod
