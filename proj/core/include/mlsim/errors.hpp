#pragma once

#include <stdexcept>
#include <string>

namespace mlsim {

// Bad or inconsistent input: malformed files, unknown flags, domain errors.
// The CLI maps this family to exit code 2.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// A row of an input file could not be parsed. Carries file:line context.
class ParseError : public InputError {
public:
    ParseError(const std::string& file, std::size_t line, const std::string& msg)
        : InputError(file + ":" + std::to_string(line) + ": " + msg),
          line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// A requested statistic has no defined value on this input (zero variance,
// no eligible pairs, impossible null-model placement). Exit code 3.
class UndefinedStatError : public std::runtime_error {
public:
    explicit UndefinedStatError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace mlsim
