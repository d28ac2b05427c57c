#pragma once

#include <stdexcept>
#include <string>

namespace homhodge {

// Invalid user-facing configuration (bad parameters, unresolved layers, ...).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A solver or eigensolver failed to produce a usable result.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace homhodge
