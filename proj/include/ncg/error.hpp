#pragma once

#include <stdexcept>
#include <string>

namespace ncg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree (non-square input, mismatched sizes, ...).
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A matrix that must be self-adjoint is not, within tolerance.
class NotHermitianError : public Error {
public:
    using Error::Error;
};

/// A matrix that must be positive semidefinite is not.
class NotPsdError : public Error {
public:
    using Error::Error;
};

/// A matrix that must be unitary is not.
class NotUnitaryError : public Error {
public:
    using Error::Error;
};

/// Operator has the wrong (or no definite) Z2-parity, or a grading is missing.
class ParityError : public Error {
public:
    using Error::Error;
};

/// Argument outside the domain of the operation (odd Clifford rank, t < 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Result would overflow or exceed a documented size cap.
class CapacityError : public Error {
public:
    using Error::Error;
};

} // namespace ncg
