#pragma once

#include <stdexcept>
#include <string>

namespace synest {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree (lengths, qubit counts, matrix sizes).
struct DimensionError : Error {
    using Error::Error;
};

/// An enumeration or dense table would exceed its configured size limit.
struct CapExceededError : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

/// A moment required as a divisor is zero within tolerance.
struct SingularMomentError : Error {
    using Error::Error;
};

/// Empirical moments that must be positive before taking logarithms are not.
struct NonPositiveMomentError : Error {
    using Error::Error;
};

/// The channel supports do not satisfy the identifiability condition or the
/// coefficient matrix is rank deficient.
struct IdentifiabilityError : Error {
    using Error::Error;
};

}  // namespace synest
