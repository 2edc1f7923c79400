#pragma once

#include <stdexcept>
#include <string>

namespace chstrip {

// Configuration/schema problems (CLI exit code 2).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Violated mathematical preconditions, e.g. m0 outside int D(beta_Gamma)
// (CLI exit code 3).
struct PreconditionError : std::runtime_error {
    explicit PreconditionError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failures that survive the built-in retries (CLI exit code 4).
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace chstrip
