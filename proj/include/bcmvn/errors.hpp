#pragma once

#include <stdexcept>
#include <string>

namespace bcmvn {

// Base class for every library error. Catching this at a program boundary is
// enough to map failures onto process exit codes.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Vector/structure lengths disagree.
struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

// Sector activation evaluated at (or too close to) the origin, where it is
// undefined. `slot` is -1 for plain complex arguments, 1 or 2 for the
// idempotent slot of a bicomplex argument.
struct ZeroArgument : Error {
    int slot;
    explicit ZeroArgument(const std::string& msg, int which_slot = -1)
        : Error(msg), slot(which_slot) {}
};

// Inversion of a bicomplex number with a vanishing idempotent component.
struct ZeroDivisor : Error {
    explicit ZeroDivisor(const std::string& msg) : Error(msg) {}
};

// Training exhausted its epoch budget. Carries the best (smallest) epoch
// misclassification count seen, for diagnostics.
struct NotConverged : Error {
    int best_epoch_misclassified;
    NotConverged(const std::string& msg, int best)
        : Error(msg), best_epoch_misclassified(best) {}
};

// A learning-rate sequence produced a value <= 0.
struct NonPositiveRate : Error {
    explicit NonPositiveRate(const std::string& msg) : Error(msg) {}
};

// Rejection sampling accepted fewer than 0.1% of candidates over a window.
struct GenerationStalled : Error {
    explicit GenerationStalled(const std::string& msg) : Error(msg) {}
};

// Malformed input file or flag value.
struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

// Filesystem read/write failure.
struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(msg) {}
};

// An operation needed the generator's hidden weights but the dataset was
// written with them stripped.
struct MissingHidden : Error {
    explicit MissingHidden(const std::string& msg) : Error(msg) {}
};

// Process exit codes used by the command-line front end.
enum ExitCode : int {
    exit_ok = 0,
    exit_failure = 1,
    exit_not_converged = 2,
    exit_parse = 3,
};

}  // namespace bcmvn
