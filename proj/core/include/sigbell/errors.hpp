#pragma once

#include <stdexcept>
#include <string>

namespace sigbell {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidScenario : Error {
  using Error::Error;
};
struct InvalidBehavior : Error {
  using Error::Error;
};
struct InvalidBudget : Error {
  using Error::Error;
};
struct InvalidArgs : Error {
  using Error::Error;
};
struct InvalidGamma : Error {
  using Error::Error;
};
struct NotDichotomic : Error {
  using Error::Error;
};
struct EmptyCell : Error {
  using Error::Error;
};
struct AllNoClick : Error {
  using Error::Error;
};
struct TooLarge : Error {
  using Error::Error;
};
struct DimensionMismatch : Error {
  using Error::Error;
};
struct InvalidPOVM : Error {
  using Error::Error;
};
struct NotPSD : Error {
  using Error::Error;
};

/// Raised when an optimization backend cannot certify a solution.
struct SolverFailure : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

}  // namespace sigbell
