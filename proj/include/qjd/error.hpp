#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qjd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid run configuration, e.g. a modulus that is not prime or too small.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// An argument outside the domain of an operation (degree 0, empty content, unknown name).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Matrix shapes that do not fit together.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A computation larger than the configured resource guard.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// Malformed text input; `offset` is the 0-based character position of the problem.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

} // namespace qjd
