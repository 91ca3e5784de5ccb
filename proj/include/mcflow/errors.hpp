#pragma once

#include <stdexcept>
#include <string>

namespace mcflow {

// Process exit codes shared between the CLI and the drivers.
enum class ExitCode : int {
    ok = 0,
    config = 2,
    solver = 3,
    singularity = 4,
    verify = 5,
};

/// Invalid configuration value or unreadable config file.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Degenerate or otherwise unusable curve parametrization at mesh build time.
class MeshError : public std::runtime_error {
public:
    explicit MeshError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Metric factor collapsed below the degeneracy floor; the discrete curve is
/// no longer an immersion (flows run into this near singularities).
class DegenerateElementError : public std::runtime_error {
public:
    explicit DegenerateElementError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Dimension mismatch or inconsistent field layout handed to the assembly.
class AssemblyError : public std::runtime_error {
public:
    explicit AssemblyError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Linear solve failed or left a residual above the configured tolerance.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace mcflow
