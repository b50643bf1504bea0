#pragma once

#include <stdexcept>
#include <string>

namespace rlab {

/// Input violates a documented precondition (bad parameter, malformed config).
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// A quantity is mathematically undefined for the given inputs (e.g. the
/// postselected state at zero success probability).
class UndefinedResultError : public std::domain_error {
public:
    explicit UndefinedResultError(const std::string& what) : std::domain_error(what) {}
};

/// Internal numerical sanity check failed (indicates an implementation bug,
/// not bad user input).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// The event loop ran dry before the delivery target was met: the
/// schedule/qubit-budget combination cannot make progress.
class SimDeadlockError : public std::runtime_error {
public:
    explicit SimDeadlockError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rlab
