#pragma once

#include <stdexcept>
#include <string>

namespace greenbound {

/// Base of every error raised by the library. Each subclass names one
/// failure condition so callers (the CLI in particular) can map it to a
/// stable exit status.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotTriangular : public Error {
public:
    using Error::Error;
};

class NotStrictlyTriangular : public Error {
public:
    using Error::Error;
};

class ConvergenceFailure : public Error {
public:
    using Error::Error;
};

class SingularIteration : public Error {
public:
    using Error::Error;
};

/// Some eigenvalue lies on (or numerically on) the imaginary axis; the
/// bounded-solutions problem is ill-posed.
class SpectrumOnAxis : public Error {
public:
    using Error::Error;
};

/// Green's function and its bounds are not defined at t = 0.
class UndefinedAtZero : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

/// A bound whose hypotheses are not met by the given data.
class Inapplicable : public Error {
public:
    using Error::Error;
};

class SingularResolvent : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

}  // namespace greenbound
