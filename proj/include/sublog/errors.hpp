#pragma once

#include <stdexcept>
#include <string>

namespace sublog {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// core
struct WindowViolation : Error { using Error::Error; };
struct DegenerateData : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };

// distributions
struct UnboundedPdf : Error { using Error::Error; };
struct EmptyInput : Error { using Error::Error; };
struct DegenerateInterval : Error { using Error::Error; };

// piecewise models
struct InvalidDomain : Error { using Error::Error; };
struct PieceBudgetExceeded : Error { using Error::Error; };

// bench / io
struct InvalidRange : Error { using Error::Error; };
struct BadHeader : Error { using Error::Error; };
struct TruncatedFile : Error { using Error::Error; };
struct NTooLarge : Error { using Error::Error; };
struct ExactnessViolation : Error { using Error::Error; };
struct IoFailure : Error { using Error::Error; };

/// Bad command-line arguments or spec strings; maps to exit code 2.
struct UsageError : Error { using Error::Error; };

}  // namespace sublog
