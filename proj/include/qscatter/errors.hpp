#ifndef QSCATTER_ERRORS_HPP
#define QSCATTER_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qscatter {

// Base class for everything thrown by this library on bad input or a
// numerical breakdown.  std::logic_error is reserved for internal bugs
// (e.g. a CSV row whose arity disagrees with its schema).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Rejected configuration value; the message names the offending field.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Argument outside a special function's domain (NaN/Inf, or a negative
// value passed to one of the ratio functions defined on [0, inf)).
class DomainError : public Error {
public:
    using Error::Error;
};

// Point Coulomb interaction evaluated at zero separation.
class SingularityError : public Error {
public:
    using Error::Error;
};

// Coherent-state parameters entered the near-null region |alpha|^2 < eps
// where the shared-normalization expectation values degenerate to 0/0.
class GuardError : public Error {
public:
    using Error::Error;
};

// An intermediate exponent would overflow double range.
class RangeError : public Error {
public:
    using Error::Error;
};

// Adaptive integrator drove the step size below its floor.  Carries the
// last accepted state so callers can report where the integration died.
class StiffnessError : public Error {
public:
    StiffnessError(const std::string& msg, double t, double x, double p)
        : Error(msg), t(t), x(x), p(p) {}
    double t, x, p;
};

// Bisection bracket whose endpoints do not straddle the sought transition.
class BracketError : public Error {
public:
    using Error::Error;
};

} // namespace qscatter

#endif
