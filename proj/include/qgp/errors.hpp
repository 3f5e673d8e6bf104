#pragma once

#include <stdexcept>
#include <string>

namespace qgp {

// Base class for all library errors so callers can catch everything at once.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two operands belong to different S_k / B_k orders.
struct OrderMismatchError : Error {
    using Error::Error;
};

// A requested order exceeds a configured enumeration / inversion limit.
struct CapacityError : Error {
    using Error::Error;
};

// Orthogonal-group machinery was handed complex-valued states.
struct RealStatesRequiredError : Error {
    using Error::Error;
};

// The Gram matrix of the commutant basis is exactly singular at this (k, d).
struct SingularGramError : Error {
    using Error::Error;
};

}  // namespace qgp
