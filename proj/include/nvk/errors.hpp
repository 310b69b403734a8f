#pragma once

#include <stdexcept>
#include <string>

namespace nvk {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Operation precondition violated: dimension/variable-count mismatch,
// index out of range, non-square input and the like.
struct ShapeError : Error {
    explicit ShapeError(const std::string& msg) : Error(msg) {}
};

// A domain invariant does not hold: d^2 != 0, non-invertible
// representation image, cross-check disagreement.
struct InvariantError : Error {
    explicit InvariantError(const std::string& msg) : Error(msg) {}
};

// Malformed input document or schema violation.
struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

// A configured combinatorial budget was exceeded.
struct ResourceLimitError : Error {
    explicit ResourceLimitError(const std::string& msg) : Error(msg) {}
};

}  // namespace nvk
