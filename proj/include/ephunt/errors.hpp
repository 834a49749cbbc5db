#pragma once

#include <stdexcept>
#include <string>

namespace ephunt {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct SingularMatrix : Error {
    using Error::Error;
};

struct NoConvergence : Error {
    using Error::Error;
};

// Thrown when a right-eigenvector stack is numerically rank deficient or a
// phase rigidity drops below tol_ep: the eigenvectors have coalesced.
struct AtExceptionalPoint : Error {
    using Error::Error;
};

struct ZeroVector : Error {
    using Error::Error;
};

struct AmbiguousMatching : Error {
    using Error::Error;
};

struct NotNormalized : Error {
    using Error::Error;
};

struct NotBiorthonormal : Error {
    using Error::Error;
};

struct StepTooLarge : Error {
    using Error::Error;
};

struct EvenNRejected : Error {
    using Error::Error;
};

struct InvalidSpec : Error {
    using Error::Error;
};

} // namespace ephunt
