#pragma once

#include <stdexcept>
#include <string>

namespace wptsim {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

// Raised when a configuration file or scenario parameter violates a hard
// constraint (caught at startup, never mid-run).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when inputs are outside the range the model is defined for.
struct ModelError : std::runtime_error {
    explicit ModelError(const std::string& msg) : std::runtime_error(msg) {}
};

inline constexpr const char* kVersion = "wptsim 0.1.0";

}  // namespace wptsim
