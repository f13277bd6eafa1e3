#pragma once

#include <stdexcept>
#include <string>

namespace dirout {

// Error categories map onto CLI exit codes: input = 2, degenerate = 3, config = 4.
enum class ErrorKind { Input, Degenerate, Config };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Malformed or non-finite input data (bad CSV cell, NaN sample value, ragged rows, ...).
class InputError : public Error {
public:
    explicit InputError(const std::string& msg) : Error(ErrorKind::Input, msg) {}
};

// Data that is structurally fine but makes the requested statistic meaningless
// (constant cross-section, rank-deficient point cloud, zero median in a ratio).
class DegenerateDataError : public Error {
public:
    explicit DegenerateDataError(const std::string& msg) : Error(ErrorKind::Degenerate, msg) {}
};

// Invalid option combinations or parameter values.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(ErrorKind::Config, msg) {}
};

} // namespace dirout
