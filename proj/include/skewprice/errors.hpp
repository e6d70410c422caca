#pragma once

#include <stdexcept>
#include <string>

namespace skewprice {

/// NaN or otherwise out-of-domain argument to a numerical kernel.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Result not representable in double precision (e.g. MGF overflow).
class RangeError : public std::range_error {
public:
    using std::range_error::range_error;
};

/// Invalid parameter combination (bad market inputs, a >= b, empty axes...).
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A term of a closed form could not be evaluated in floating point.
/// The message names the offending term.
class NumericalRegimeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Truncation interval carries (numerically) zero probability mass.
class SingularTruncationError : public NumericalRegimeError {
public:
    using NumericalRegimeError::NumericalRegimeError;
};

/// File could not be opened or written. The message carries the path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace skewprice
