#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace matmcd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or degenerate input data (CSV cells, zero variance, too few samples).
class DataError : public Error {
public:
    using Error::Error;
};

/// A model response that could not be parsed into the expected structure.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::string raw)
        : Error(what), raw_(std::move(raw)) {}

    const std::string& raw() const noexcept { return raw_; }

private:
    std::string raw_;
};

/// Hard constraints that no acyclic graph can satisfy.
class InfeasibleConstraints : public Error {
public:
    using Error::Error;
};

/// Errors from the chat/embedding transport or the replay cassette.
class GatewayError : public Error {
public:
    using Error::Error;
};

/// A pipeline stage failed; wraps the original message with the stage name.
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& what)
        : Error("stage '" + stage + "' failed: " + what), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

}  // namespace matmcd
