#pragma once

#include <stdexcept>
#include <string>

namespace pulearn {

// Base of every error thrown by the library. Each failure mode gets its own
// type so callers can catch exactly what they can handle.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Generic precondition violation that has no more specific type below.
struct InvalidArgument : Error { using Error::Error; };

// numkit
struct NotPositiveDefinite : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };

// datamodel
struct InvalidLabel : Error { using Error::Error; };
struct ScarViolation : Error { using Error::Error; };
struct DegenerateLabels : Error { using Error::Error; };

// logistic fitting
struct SeparationDetected : Error { using Error::Error; };
struct SingularHessian : Error { using Error::Error; };

// estimators
struct NoLabeledExamples : Error { using Error::Error; };
struct ZeroDirection : Error { using Error::Error; };
struct COutOfRange : Error { using Error::Error; };
struct AllRestartsFailed : Error { using Error::Error; };

// metrics
struct LengthMismatch : Error { using Error::Error; };
struct SingleClassTruth : Error { using Error::Error; };
struct ZeroVector : Error { using Error::Error; };

// ingest
struct ParseError : Error { using Error::Error; };
struct NonNumericFeature : Error { using Error::Error; };
struct MissingColumn : Error { using Error::Error; };
struct ConstantFeature : Error { using Error::Error; };
struct MissingTruth : Error { using Error::Error; };
struct EmptySplit : Error { using Error::Error; };

// config / reporting
struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace pulearn
