#pragma once

#include <stdexcept>
#include <string>

namespace vlfs {

/// Base class for all solver errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid user input (geometry, parameters, config files).
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

/// Structure endpoint or joint cannot be placed on a grid line.
class MisalignmentError : public ValidationError {
public:
    explicit MisalignmentError(const std::string& msg) : ValidationError(msg) {}
};

/// Mesh entity relationships are inconsistent (e.g. joint without two
/// adjacent structure facets).
class TopologyError : public Error {
public:
    explicit TopologyError(const std::string& msg) : Error(msg) {}
};

/// Linear system factorization hit an exactly singular pivot.
class SingularMatrixError : public Error {
public:
    SingularMatrixError(const std::string& msg, long pivot)
        : Error(msg), pivot_index(pivot) {}
    long pivot_index; ///< column/pivot reported by the factorization, -1 if unknown
};

/// Mismatched vector/matrix sizes.
class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& msg) : Error(msg) {}
};

} // namespace vlfs
