#pragma once

#include <stdexcept>
#include <string>

namespace dtcp {

// Failure categories used across the library. Callers that need to tell a
// strip violation apart from a series that failed to converge catch the
// derived type.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Argument outside the domain / analyticity strip of a transform.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Evaluation at a pole (e.g. Gamma at a nonpositive integer).
class PoleError : public Error {
public:
    explicit PoleError(const std::string& msg) : Error(msg) {}
};

// A branch cut was hit or branch continuity could not be established.
class BranchError : public Error {
public:
    explicit BranchError(const std::string& msg) : Error(msg) {}
};

// An iteration or series exceeded its budget without meeting tolerance.
class ConvergenceError : public Error {
public:
    explicit ConvergenceError(const std::string& msg) : Error(msg) {}
};

// Result not representable in double precision.
class RangeError : public Error {
public:
    explicit RangeError(const std::string& msg) : Error(msg) {}
};

// Model or contract parameters violate an invariant; message names it.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// No admissible integration contour for a (payoff, model) pair.
class ContourError : public Error {
public:
    explicit ContourError(const std::string& msg) : Error(msg) {}
};

} // namespace dtcp
