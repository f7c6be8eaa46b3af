#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pdm {

enum class ErrorKind {
    MissingParameter,
    InvalidParameter,
    DomainViolation,
    SingularPoint,
    SingularCoefficient,
    SyntaxError,
    UnknownIdentifier,
    DomainError,
    NonPositiveScale,
    NoPeriod,
    InvalidSpec,
    UnsupportedFamily,
    UnknownCheck,
    ConfigError,
};

std::string_view to_string(ErrorKind kind);

/// Base exception for every failure raised by the library. The kind is the
/// machine-readable tag; what() carries a human-readable message.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Parameter problems name the offending field.
class ParameterError : public Error {
public:
    ParameterError(ErrorKind kind, std::string field, const std::string& message)
        : Error(kind, field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Raised when a coordinate leaves the region where the mass profile is
/// positive or where a coefficient of the dynamics is finite.
class DomainViolation : public Error {
public:
    DomainViolation(ErrorKind kind, std::size_t coordinate, double x, const std::string& message)
        : Error(kind, message), coordinate_(coordinate), x_(x) {}
    DomainViolation(std::size_t coordinate, double x, const std::string& message)
        : DomainViolation(ErrorKind::DomainViolation, coordinate, x, message) {}

    std::size_t coordinate() const noexcept { return coordinate_; }
    double x() const noexcept { return x_; }

private:
    std::size_t coordinate_;
    double x_;
};

/// Parse failure. position is 1-based: the column of the offending
/// character, or length+1 for an unexpected end of input.
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t position, std::string expected)
        : Error(ErrorKind::SyntaxError,
                "syntax error at position " + std::to_string(position) + ": expected " + expected),
          position_(position), expected_(std::move(expected)) {}

    std::size_t position() const noexcept { return position_; }
    const std::string& expected() const noexcept { return expected_; }

private:
    std::size_t position_;
    std::string expected_;
};

class UnknownIdentifier : public Error {
public:
    UnknownIdentifier(std::string name, std::size_t position)
        : Error(ErrorKind::UnknownIdentifier,
                "unknown identifier '" + name + "' at position " + std::to_string(position)),
          name_(std::move(name)), position_(position) {}

    const std::string& name() const noexcept { return name_; }
    std::size_t position() const noexcept { return position_; }

private:
    std::string name_;
    std::size_t position_;
};

/// Evaluation outside an expression's natural domain (ln/sqrt of a negative,
/// division by zero). subexpression is the printed offending node.
class ExprDomainError : public Error {
public:
    ExprDomainError(std::string subexpression, const std::string& reason)
        : Error(ErrorKind::DomainError, reason + " in '" + subexpression + "'"),
          subexpression_(std::move(subexpression)) {}

    const std::string& subexpression() const noexcept { return subexpression_; }

private:
    std::string subexpression_;
};

}  // namespace pdm
