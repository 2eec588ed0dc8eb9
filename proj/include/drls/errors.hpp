#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace drls {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input violates a precondition (shape, parameter range, non-finite entries).
struct InvalidInput : Error {
    using Error::Error;
};

/// Requested rank exceeds what the matrix supports.
struct RankError : Error {
    using Error::Error;
};

/// Unregularized solve on a rank-deficient system.
struct SingularSystem : Error {
    using Error::Error;
};

/// Quantity undefined for this input (e.g. zero spectral tail).
struct DegenerateInput : Error {
    using Error::Error;
};

/// Malformed table file; carries the 1-based line and column of the offending cell.
struct ParseError : Error {
    std::size_t line = 0;
    std::size_t col = 0;
    ParseError(const std::string& msg, std::size_t line_ = 0, std::size_t col_ = 0)
        : Error(msg), line(line_), col(col_) {}
};

}  // namespace drls
