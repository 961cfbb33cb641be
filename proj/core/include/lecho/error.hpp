#pragma once

#include <stdexcept>
#include <string>

namespace lecho {

/// Invalid user-supplied parameters (odd chain length, non-positive beta, ...).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A mode whose single-particle energy vanishes where a formula divides by it.
class DegenerateModeError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Spectrum with (near-)coincident levels where non-degeneracy is required.
class DegenerateSpectrumError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Matrix that is not a valid density operator (negative eigenvalue, bad trace).
class InvalidStateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace lecho
