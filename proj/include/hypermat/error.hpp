#pragma once

#include <stdexcept>
#include <string>

namespace hypermat {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed shapes, index out of range, mismatched operand shapes.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Operands violate the BM conformability pattern.
class ConformabilityError : public ShapeError {
public:
    ConformabilityError(std::size_t operand, std::size_t axis, const std::string& detail)
        : ShapeError("operand " + std::to_string(operand) + ", axis " + std::to_string(axis) +
                     ": " + detail),
          operand_(operand),
          axis_(axis) {}

    std::size_t operand() const noexcept { return operand_; }
    std::size_t axis() const noexcept { return axis_; }

private:
    std::size_t operand_;
    std::size_t axis_;
};

/// An input is outside the mathematical domain of an operation
/// (wrong order, zero entries where logs are needed, even Hadamard order, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Serialized input could not be parsed.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Numeric failure: degenerate pivots, vanishing normalizers, exhausted branches.
class NumericError : public Error {
public:
    using Error::Error;
};

class DegeneracyError : public NumericError {
public:
    using NumericError::NumericError;
};

/// A monomial system has a derived constraint of the form 1 = b with b != 1.
class InfeasibleError : public NumericError {
public:
    using NumericError::NumericError;
};

}  // namespace hypermat
