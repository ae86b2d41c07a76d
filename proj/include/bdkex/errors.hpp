#pragma once

#include <stdexcept>
#include <string>

namespace bdkex {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Group elements or scalars from different parameter sets were combined.
struct DomainMismatchError : Error {
  using Error::Error;
};

// Scalar inversion of a value with no inverse (zero mod q).
struct NonInvertibleError : Error {
  using Error::Error;
};

// Parameter generation exhausted its retry budget.
struct ParamGenError : Error {
  using Error::Error;
};

// A protocol operation was invoked out of phase.
struct StateMachineError : Error {
  using Error::Error;
};

// A round operation is missing required inputs.
struct IncompleteRoundError : Error {
  using Error::Error;
};

// Unknown origin or destination in the simulated network.
struct RoutingError : Error {
  using Error::Error;
};

// Invalid scenario, tap, or group configuration.
struct ConfigError : Error {
  using Error::Error;
};

// Party count below the protocol minimum.
struct InvalidSizeError : Error {
  using Error::Error;
};

// The run cannot make progress: a party is blocked and no deliveries remain.
struct StuckRunError : Error {
  using Error::Error;
};

// An observed message contradicts what the protocol requires.
struct ProtocolDeviationError : Error {
  using Error::Error;
};

}  // namespace bdkex
