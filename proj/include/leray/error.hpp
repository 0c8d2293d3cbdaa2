#pragma once

#include <stdexcept>
#include <string>

namespace leray {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Integral known to diverge (endpoint exponent <= -1).
class DivergentIntegral : public Error {
public:
    using Error::Error;
};

/// Quadrature or function evaluation failed (NaN, budget exhausted, ...).
class EvaluationError : public Error {
public:
    using Error::Error;
};

class InvalidProfile : public Error {
public:
    using Error::Error;
};

/// Numerical class test could not decide; never silently guessed.
class InconclusiveClassification : public Error {
public:
    using Error::Error;
};

/// Kernel denominator too close to zero.
class NearSingularity : public Error {
public:
    using Error::Error;
};

/// A measure-dependent integral diverges.
class NonAdmissibleMeasure : public Error {
public:
    NonAdmissibleMeasure(const std::string& what, int k = 0, int endpoint = -1)
        : Error(what), k_(k), endpoint_(endpoint) {}
    int k() const noexcept { return k_; }
    /// 0 or 1 for the offending endpoint, -1 when not attributable.
    int endpoint() const noexcept { return endpoint_; }

private:
    int k_;
    int endpoint_;
};

/// Operation requires a domain class the input does not have.
class UnsupportedClass : public Error {
public:
    using Error::Error;
};

/// Malformed JSON domain/measure specification.
class SpecError : public Error {
public:
    using Error::Error;
};

}  // namespace leray
