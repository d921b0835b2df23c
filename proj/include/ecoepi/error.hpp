#pragma once

#include <stdexcept>
#include <string>

namespace ecoepi {

// Status values shared with the C API and the CLI exit codes.
enum class ErrorCode : int {
    ok = 0,
    invalid_argument = 1,
    config = 2,
    io = 3,
    numerical = 4,
    degenerate = 5,
    internal = 6,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

struct InvalidArgument : Error {
    explicit InvalidArgument(const std::string& what) : Error(ErrorCode::invalid_argument, what) {}
};

struct ConfigError : Error {
    ConfigError(const std::string& what, int line = 0)
        : Error(ErrorCode::config, line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    [[nodiscard]] int line() const noexcept { return line_; }

private:
    int line_;
};

struct IoError : Error {
    explicit IoError(const std::string& what) : Error(ErrorCode::io, what) {}
};

struct NumericalError : Error {
    explicit NumericalError(const std::string& what) : Error(ErrorCode::numerical, what) {}
};

// A closed-form expression has a vanishing denominator. `expression` names it.
struct DegenerateError : Error {
    explicit DegenerateError(std::string expression)
        : Error(ErrorCode::degenerate, "degenerate denominator: " + expression), expression_(std::move(expression)) {}
    [[nodiscard]] const std::string& expression() const noexcept { return expression_; }

private:
    std::string expression_;
};

} // namespace ecoepi
