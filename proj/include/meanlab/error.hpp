#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace meanlab {

/// Base class for every error raised by the library. `code()` is a short
/// machine-readable identifier that the CLI reports verbatim.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

class UsageError : public Error {
public:
    explicit UsageError(const std::string& what) : Error("usage", what) {}
};

class HorizonExceeded : public Error {
public:
    explicit HorizonExceeded(const std::string& what) : Error("horizon-exceeded", what) {}
};

class UniverseExceeded : public Error {
public:
    explicit UniverseExceeded(const std::string& what) : Error("universe-exceeded", what) {}
};

class OverflowError : public Error {
public:
    explicit OverflowError(const std::string& what) : Error("overflow", what) {}
};

class UnsupportedShape : public Error {
public:
    explicit UnsupportedShape(const std::string& what) : Error("unsupported-shape", what) {}
};

class CapExceeded : public Error {
public:
    explicit CapExceeded(const std::string& what) : Error("cap-exceeded", what) {}
};

class PreconditionError : public Error {
public:
    explicit PreconditionError(const std::string& what) : Error("precondition", what) {}
};

class ParseError : public Error {
public:
    ParseError(std::size_t pos, std::string expected, const std::string& what)
        : Error("syntax", what + " at position " + std::to_string(pos) + " (expected " + expected + ")"),
          pos_(pos), expected_(std::move(expected)) {}
    std::size_t position() const noexcept { return pos_; }
    const std::string& expected() const noexcept { return expected_; }

private:
    std::size_t pos_;
    std::string expected_;
};

}  // namespace meanlab
