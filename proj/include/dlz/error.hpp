#pragma once

#include <stdexcept>
#include <string>

namespace dlz {

/// Malformed or physically meaningless input (bad dimensions, non-finite
/// entries, invalid quantum numbers, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input text that cannot be read as the expected format.
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A request the library recognises but does not implement (e.g. pi
/// polarization in the atomic builder).
class Unsupported : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine could not deliver its accuracy guarantee.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Special-function evaluation lost accuracy; callers may switch to the
/// ODE route.
class AccuracyLoss : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

/// Adaptive integration needed a step below the lower clamp.
class StepUnderflow : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

}  // namespace dlz
