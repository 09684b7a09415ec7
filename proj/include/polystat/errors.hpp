#pragma once

#include <stdexcept>
#include <string>

namespace polystat {

// Base class for all polystat errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Polygon invariant violations detected at construction time
// (self-intersection, zero-length side, non-finite coordinate, ...).
struct InvalidPolygon : Error {
    using Error::Error;
};

// An interior angle sits within tolerance of {0, pi, 2pi}.
struct DegenerateVertex : InvalidPolygon {
    using InvalidPolygon::InvalidPolygon;
};

// Two polygons with different vertex counts were compared.
struct MismatchedN : Error {
    using Error::Error;
};

struct InvalidParams : Error {
    using Error::Error;
};

// Argument outside a function's mathematical domain.
struct DomainError : Error {
    using Error::Error;
};

// A perturbation needs a line intersection that does not exist.
struct ParallelAdjacentSide : Error {
    using Error::Error;
};

// A perturbation parameter produced an invalid polygon.
struct OutOfRange : Error {
    using Error::Error;
};

// Flow started from an unusable polygon.
struct InvalidStart : Error {
    using Error::Error;
};

// Unreadable or structurally malformed input (JSON/CSV/files).
struct FormatError : Error {
    using Error::Error;
};

}  // namespace polystat
