#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace germ {

/// Every failure the library can signal, in one taxonomy. The CLI maps
/// these onto exit codes and JSON error objects.
enum class ErrorKind {
    SyntaxError,
    UnknownVariable,
    UnknownFunction,
    DomainError,
    MissingBinding,
    DimensionMismatch,
    SeedResidualTooLarge,
    SingularJacobian,
    NoConvergence,
    SingularAtSeed,
    DegenerateSample,
    UnknownCatalogEntry,
    ConfigError,
    IoError,
    InternalError,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    // Optional payloads, set fluently at the throw site.
    Error& with_span(std::size_t begin, std::size_t end) {
        has_span_ = true;
        span_begin_ = begin;
        span_end_ = end;
        return *this;
    }
    Error& with_value(double v) {
        has_value_ = true;
        value_ = v;
        return *this;
    }
    Error& with_token(std::string token) {
        token_ = std::move(token);
        return *this;
    }

    bool has_span() const noexcept { return has_span_; }
    std::size_t span_begin() const noexcept { return span_begin_; }
    std::size_t span_end() const noexcept { return span_end_; }
    bool has_value() const noexcept { return has_value_; }
    double value() const noexcept { return value_; }
    const std::string& token() const noexcept { return token_; }

private:
    ErrorKind kind_;
    bool has_span_ = false;
    std::size_t span_begin_ = 0;
    std::size_t span_end_ = 0;
    bool has_value_ = false;
    double value_ = 0.0;
    std::string token_;
};

}  // namespace germ
