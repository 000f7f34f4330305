#pragma once

#include <stdexcept>
#include <string>

namespace chainbound {

// Bad user-supplied parameter or config value.
struct ParameterError : std::runtime_error {
    explicit ParameterError(const std::string& msg) : std::runtime_error(msg) {}
};

// Input data fails a structural or axiom check.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Request exceeds a configured capability limit (e.g. exact solver size).
struct CapabilityError : std::runtime_error {
    explicit CapabilityError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace chainbound
