#pragma once

#include <stdexcept>

namespace isosim {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Anything that boils down to unusable input: bad file, bad flag value.
struct ParseError : Error {
  using Error::Error;
};

struct MalformedFixture : ParseError {
  using ParseError::ParseError;
};

struct NonMonotonePower : ParseError {
  using ParseError::ParseError;
};

struct MissingInitialRow : ParseError {
  using ParseError::ParseError;
};

// The Verdet model is not trusted outside the material's validity range.
struct TemperatureOutOfRange : Error {
  using Error::Error;
};

struct ComponentDestroyed : Error {
  using Error::Error;
};

struct UndefinedPath : Error {
  using Error::Error;
};

struct NonPositiveReading : Error {
  using Error::Error;
};

struct CalibrationDiverged : Error {
  using Error::Error;
};

}  // namespace isosim
