#ifndef TIMEBIN_ERRORS_HPP
#define TIMEBIN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace timebin {

// Validation errors reject bad inputs before any simulation runs.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Simulation errors arise from the dynamics of an otherwise valid run.
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DuplicateMode final : ValidationError {
  using ValidationError::ValidationError;
};
struct NormExceeded final : ValidationError {
  using ValidationError::ValidationError;
};
struct ZeroProbability final : ValidationError {
  using ValidationError::ValidationError;
};
struct BasisIncomplete final : ValidationError {
  using ValidationError::ValidationError;
};
struct InvalidRatio final : ValidationError {
  using ValidationError::ValidationError;
};
struct NotUnitary final : ValidationError {
  using ValidationError::ValidationError;
};
struct InvalidAmplitude final : ValidationError {
  using ValidationError::ValidationError;
};
struct InvalidInput final : ValidationError {
  using ValidationError::ValidationError;
};
struct ZeroMap final : ValidationError {
  using ValidationError::ValidationError;
};

struct TimeWindowOverflow final : SimulationError {
  using SimulationError::SimulationError;
};

}  // namespace timebin

#endif
