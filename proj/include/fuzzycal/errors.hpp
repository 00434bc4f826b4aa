#pragma once

#include <stdexcept>
#include <string>

namespace fuzzycal {

/// A file or payload failed validation (parse errors, bad labels, rows that
/// cannot be normalized, schema/version mismatches, dimension mismatches
/// between artifacts).
struct DataError : std::runtime_error {
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// The solver declined to run, e.g. an exhaustive enumeration whose state
/// space exceeds the configured cap. Carries the offending size.
struct SolverRefusal : std::runtime_error {
  SolverRefusal(const std::string& what, double size)
      : std::runtime_error(what), state_space_size(size) {}
  double state_space_size;
};

}  // namespace fuzzycal
