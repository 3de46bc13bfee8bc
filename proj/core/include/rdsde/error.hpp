#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rdsde {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Mismatched grids, dimensions or column counts.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A documented precondition does not hold (e.g. negative initial state).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Requested problem size exceeds a configured cap.
class SizeError : public Error {
public:
    using Error::Error;
};

/// Covariance factorization failed even after jitter.
class FactorizationError : public Error {
public:
    using Error::Error;
};

/// A coefficient or functional produced a non-finite value.
class EvaluationError : public Error {
public:
    using Error::Error;
};

/// A history accessor was asked for a value in the future.
class CausalityError : public Error {
public:
    using Error::Error;
};

/// Solver state became non-finite.
class BlowUpError : public Error {
public:
    BlowUpError(const std::string& what, std::size_t step)
        : Error(what), step_(step) {}
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

/// Picard iteration did not reach its tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, std::size_t interval, double residual)
        : Error(what), interval_(interval), residual_(residual) {}
    std::size_t interval() const noexcept { return interval_; }
    double residual() const noexcept { return residual_; }

private:
    std::size_t interval_;
    double residual_;
};

/// Expression source could not be parsed. `offset` is a byte offset into the source.
class SyntaxError : public Error {
public:
    SyntaxError(const std::string& what, std::size_t offset)
        : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

}  // namespace rdsde
