#ifndef FRACQM_ERRORS_HPP
#define FRACQM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fracqm {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A gamma evaluation requested exactly at a non-positive integer.
class GammaPoleError : public Error {
public:
    using Error::Error;
};

// Result magnitude exceeds double range.
class OverflowError : public Error {
public:
    using Error::Error;
};

// An iterative scheme failed to reach its target tolerance. The message
// carries diagnostics (worst subinterval, achieved estimate, budget).
class NonConvergenceError : public Error {
public:
    using Error::Error;
};

// Structurally bad input; the message names the violated constraint.
class InvalidParametersError : public Error {
public:
    using Error::Error;
};

// No vertical abscissa separates the two gamma pole families.
class ContourPlacementError : public Error {
public:
    using Error::Error;
};

// A transform-validity condition failed (Laplace / fractional-derivative
// parameter constraints).
class ConstraintViolationError : public Error {
public:
    using Error::Error;
};

// Two quadrature poles closer than the exclusion window allows.
class PoleTooCloseError : public Error {
public:
    using Error::Error;
};

// Half-period contributions of an oscillatory tail failed to alternate.
class NonAlternationError : public Error {
public:
    using Error::Error;
};

class OutOfDomainError : public Error {
public:
    using Error::Error;
};

} // namespace fracqm

#endif
