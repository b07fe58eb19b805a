#pragma once

#include <stdexcept>

namespace lemniscate {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid argument or usage (bad c, bad margin, n out of range, ...).
struct ParameterError : Error {
    using Error::Error;
};

// Evaluation outside a map's domain (e.g. the Joukowski map at z = 0).
struct EvaluationDomainError : Error {
    using Error::Error;
};

// Coincident points where distinct ones are required.
struct DegenerateInputError : Error {
    using Error::Error;
};

// Strip packing cannot satisfy its constraints; the message names the
// violated constraint.
struct InfeasibleGeometryError : Error {
    using Error::Error;
};

// Raster would exceed the cell-count guard; the message names the smallest
// affordable cell size.
struct ResolutionError : Error {
    using Error::Error;
};

}  // namespace lemniscate
