#pragma once

#include <stdexcept>
#include <string>

namespace gapeig {

/// Problem-file or expression syntax error, with a character position.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"),
          position(pos) {}
    std::size_t position;
};

/// Evaluation outside the domain of an expression (1/0, sqrt(-1), ...).
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A ProblemSpec invariant failed validation.
class InvariantError : public std::runtime_error {
public:
    explicit InvariantError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Adaptive stepping could not proceed (step-size underflow).
class PropagationError : public std::runtime_error {
public:
    PropagationError(const std::string& msg, double where)
        : std::runtime_error(msg + " (near x = " + std::to_string(where) + ")"),
          location(where) {}
    double location;
};

/// No decaying solution was found: lambda is not in a spectral gap.
class NonDecayingError : public std::runtime_error {
public:
    explicit NonDecayingError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A truncation scheme was requested on a problem that cannot support it.
class SchemeMismatchError : public std::runtime_error {
public:
    explicit SchemeMismatchError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace gapeig
