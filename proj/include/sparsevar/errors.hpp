#pragma once

#include <stdexcept>
#include <string>

namespace sparsevar {

// Base class for every error thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BadParams : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct NotPositiveDefinite : Error { using Error::Error; };
struct NotPsd : Error { using Error::Error; };
struct OverflowError : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct NotOptimal : Error { using Error::Error; };
struct SeriesTooShort : Error { using Error::Error; };
struct ZeroMatrix : Error { using Error::Error; };
struct NotStationary : Error { using Error::Error; };
struct UnstableModel : Error { using Error::Error; };
struct WindowTooLarge : Error { using Error::Error; };
struct AllColumnsInfeasible : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace sparsevar
