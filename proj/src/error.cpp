#include "pdm/error.hpp"

namespace pdm {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::MissingParameter: return "MissingParameter";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::SingularPoint: return "SingularPoint";
    case ErrorKind::SingularCoefficient: return "SingularCoefficient";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::NonPositiveScale: return "NonPositiveScale";
    case ErrorKind::NoPeriod: return "NoPeriod";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::UnsupportedFamily: return "UnsupportedFamily";
    case ErrorKind::UnknownCheck: return "UnknownCheck";
    case ErrorKind::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

}  // namespace pdm
