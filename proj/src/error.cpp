#include "germ/error.hpp"

namespace germ {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::SyntaxError: return "SyntaxError";
        case ErrorKind::UnknownVariable: return "UnknownVariable";
        case ErrorKind::UnknownFunction: return "UnknownFunction";
        case ErrorKind::DomainError: return "DomainError";
        case ErrorKind::MissingBinding: return "MissingBinding";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::SeedResidualTooLarge: return "SeedResidualTooLarge";
        case ErrorKind::SingularJacobian: return "SingularJacobian";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::SingularAtSeed: return "SingularAtSeed";
        case ErrorKind::DegenerateSample: return "DegenerateSample";
        case ErrorKind::UnknownCatalogEntry: return "UnknownCatalogEntry";
        case ErrorKind::ConfigError: return "ConfigError";
        case ErrorKind::IoError: return "IoError";
        case ErrorKind::InternalError: return "InternalError";
    }
    return "InternalError";
}

}  // namespace germ
