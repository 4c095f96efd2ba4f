#ifndef NONLOCAL_ERROR_HPP
#define NONLOCAL_ERROR_HPP

#include <stdexcept>
#include <string>

namespace nonlocal {

// Base of every error raised by the library. Callers that only care about
// "something went wrong in the numerics" catch this one.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A documented precondition of an operation was violated by the caller.
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Input data is malformed (non-finite samples, length mismatch, bad profile).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// The discretized operator has a zero dispersal budget at a node and the
// caller did not enable the exclusion path.
class DegeneratePointError : public Error {
public:
    using Error::Error;
};

// Power iteration ran out of iterations. Carries the last certified bracket
// on the shifted spectral radius.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double lower, double upper, int iterations)
        : Error(what), lower_(lower), upper_(upper), iterations_(iterations) {}

    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }
    int iterations() const noexcept { return iterations_; }

private:
    double lower_;
    double upper_;
    int iterations_;
};

class IrreducibilityError : public Error {
public:
    using Error::Error;
};

// F(lambda) = 1 could not be bracketed: the rank-one surrogate has no
// eigenfunction in the continuum limit.
class CriterionFailure : public Error {
public:
    CriterionFailure(const std::string& what, double limit_value)
        : Error(what), limit_value_(limit_value) {}

    // F evaluated at the closest admissible lambda to -sigma.
    double limit_value() const noexcept { return limit_value_; }

private:
    double limit_value_;
};

class NumericalInconsistency : public Error {
public:
    using Error::Error;
};

// lambda_p is numerically zero: the maximum principle verdict is undecidable.
class ResonanceError : public Error {
public:
    using Error::Error;
};

class WitnessError : public Error {
public:
    using Error::Error;
};

class SubsolutionError : public Error {
public:
    using Error::Error;
};

// Monotone iteration produced a non-monotone step; the shift k is too small.
class MonotonicityError : public Error {
public:
    using Error::Error;
};

// Shifted resolvent (A - kI) is singular.
class ResolventError : public Error {
public:
    using Error::Error;
};

// Explicit time stepping produced negative densities.
class StabilityError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

} // namespace nonlocal

#endif
