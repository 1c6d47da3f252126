#pragma once

#include <stdexcept>
#include <string>

namespace cnpe {

/// Bad input data or a problem that fails its admissibility checks.
/// CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Linear algebra failure (singular matrix, residual contract violated).
/// CLI maps this to exit code 3.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace cnpe
