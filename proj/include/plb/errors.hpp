#pragma once

#include <stdexcept>
#include <string>

namespace plb {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation (e.g. u + eps <= 0).
struct DomainError : Error {
    using Error::Error;
};

/// A ProblemSpec or configuration violating the admissibility rules.
struct InvalidSpec : Error {
    using Error::Error;
};

/// An iterative process exhausted its iteration cap.
struct ConvergenceError : Error {
    using Error::Error;
};

/// detect_fold called on a branch without a tangent sign flip.
struct NoFoldError : Error {
    using Error::Error;
};

/// Solution count queried within the fold's resolution limit.
struct QueryTooCloseToFold : Error {
    using Error::Error;
};

/// Asymptote fit attempted with fewer than the required tail points.
struct TailTooShort : Error {
    using Error::Error;
};

/// Malformed or inadmissible run configuration.
struct ConfigError : Error {
    using Error::Error;
};

} // namespace plb
