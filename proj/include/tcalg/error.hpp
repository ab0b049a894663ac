#pragma once

#include <stdexcept>
#include <string>

namespace tcalg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid Blaschke product data. The kind distinguishes the violated precondition.
class BlaschkeError : public Error {
public:
    enum class Kind { DegreeTooSmall, ZeroOutsideDisk, FirstZeroNotOrigin, LambdaNotUnimodular };

    BlaschkeError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Evaluation at (or numerically at) a pole of a rational function.
class PoleError : public Error {
public:
    using Error::Error;
};

/// An iterative solver did not reach its tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Domain / size precondition failures (grid sizes, truncation windows, ranges).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Invalid run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace tcalg
