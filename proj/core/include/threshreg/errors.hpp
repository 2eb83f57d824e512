// errors.hpp
//
// Exception hierarchy for the threshold-regression library.  Everything
// thrown on purpose derives from threshreg::Error so callers can map the
// whole family onto an exit code in one catch clause.

#pragma once

#include <stdexcept>
#include <string>

namespace threshreg {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Construction / ingestion problems (bad input data or configuration).
struct InputError : Error { using Error::Error; };
struct InvalidDataset : InputError { using InputError::InputError; };
struct DimensionMismatch : InputError { using InputError::InputError; };
struct TooFewRows : InputError { using InputError::InputError; };
struct ParseError : InputError { using InputError::InputError; };
struct MissingValue : InputError { using InputError::InputError; };
struct DomainError : InputError { using InputError::InputError; };

// Numerical failures detected while estimating.
struct NumericError : Error { using Error::Error; };
struct EmptyGrid : NumericError { using NumericError::NumericError; };
struct RankDeficient : NumericError { using NumericError::NumericError; };
struct DegenerateFit : NumericError { using NumericError::NumericError; };
struct ZeroDenominator : NumericError { using NumericError::NumericError; };
struct SingularMoment : NumericError { using NumericError::NumericError; };

}  // namespace threshreg
