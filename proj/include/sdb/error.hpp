#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sdb {

// Error taxonomy. The CLI maps these onto exit codes:
// ConfigError -> 2, IoError (and ParseError) -> 3, EstimationError -> 4.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Base for per-fit failures; the budgeted executor records these and moves on.
struct EstimationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateSampleError : EstimationError {
  using EstimationError::EstimationError;
};

struct SingularDesignError : EstimationError {
  using EstimationError::EstimationError;
};

struct SeparationError : EstimationError {
  using EstimationError::EstimationError;
};

struct ConvergenceError : EstimationError {
  ConvergenceError(const std::string& msg, int iterations_used, double final_score_norm)
      : EstimationError(msg), iterations(iterations_used), score_norm(final_score_norm) {}
  int iterations;
  double score_norm;
};

// A run whose every iteration failed (or whose reference fit failed).
struct EstimationExhaustedError : EstimationError {
  using EstimationError::EstimationError;
};

struct EmptyEnsembleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : IoError {
  ParseError(const std::string& file, std::size_t line_number, const std::string& what)
      : IoError(file + ":" + std::to_string(line_number) + ": " + what), line(line_number) {}
  std::size_t line;
};

}  // namespace sdb
