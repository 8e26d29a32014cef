#pragma once

#include <stdexcept>
#include <string>

namespace ionfilm {

/// Base class for all library errors.
struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid or inconsistent user-supplied configuration.
struct config_error : error {
    explicit config_error(const std::string& msg) : error(msg) {}
};

/// Evaluation requested at a singular point (pole, resonance, zero determinant).
struct singular_error : error {
    explicit singular_error(const std::string& msg) : error(msg) {}
};

/// A root search or iterative scheme failed to converge.
struct convergence_error : error {
    explicit convergence_error(const std::string& msg) : error(msg) {}
};

/// State became non-finite during numerical integration.
struct integration_error : error {
    explicit integration_error(const std::string& msg) : error(msg) {}
};

} // namespace ionfilm
