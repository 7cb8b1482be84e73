#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace asdym {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Two jets (or matrices) with different shapes met in one operation.
struct ContextMismatch : Error {
    using Error::Error;
};

struct IndexOutOfRange : Error {
    using Error::Error;
};

/// The value coefficient of a jet is too small to invert; the sample point is singular.
struct NearZeroValue : Error {
    using Error::Error;
};

struct ExpOverflow : Error {
    using Error::Error;
};

struct InsufficientOrder : Error {
    using Error::Error;
};

/// No invertible pivot was found during elimination.
struct SingularMatrix : Error {
    SingularMatrix(std::string what, std::size_t step, std::vector<std::size_t> trace)
        : Error(std::move(what)), step(step), pivot_trace(std::move(trace)) {}
    std::size_t step;
    /// Pivot row chosen at each completed elimination step.
    std::vector<std::size_t> pivot_trace;
};

/// (A^-1)_{ji} exists but is not invertible, so |A|_{ij} is undefined.
struct NonInvertibleEntry : Error {
    using Error::Error;
};

struct InvalidSeed : Error {
    using Error::Error;
};

struct ZeroRatio : Error {
    using Error::Error;
};

/// The Toeplitz grid D_{l+1}, or a gamma_0 combination, is singular at the sample point.
struct SingularPoint : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

}  // namespace asdym
