#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace transducer {

// Invalid or incomplete configuration. key() names the offending entry.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& message)
        : std::runtime_error(message), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

// A numerical procedure could not produce a meaningful result.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// (sI - A) or a Mason determinant vanished. omega() is the offending angular frequency.
class SingularNetworkError : public NumericalError {
public:
    SingularNetworkError(double omega, const std::string& message)
        : NumericalError(message), omega_(omega) {}

    double omega() const noexcept { return omega_; }

private:
    double omega_;
};

// Malformed input file. line() is 1-based, 0 when the error is not tied to a line.
class FormatError : public std::runtime_error {
public:
    FormatError(std::string file, std::size_t line, const std::string& message)
        : std::runtime_error(file + (line ? ":" + std::to_string(line) : std::string()) + ": " + message),
          file_(std::move(file)), line_(line) {}

    const std::string& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string file_;
    std::size_t line_;
};

}  // namespace transducer
