/**
 * @file errors.hpp
 * @brief Exception types raised by the GRLW solver library
 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace grlw {

/// Argument outside the mathematical domain of an operation (eta outside [0,1], h <= 0, ...)
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Node or element index outside the mesh
class IndexError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Inconsistent dimensions between matrices and vectors
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Invalid problem or mesh configuration
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Zero (or sub-tolerance) pivot met during banded LU
class SingularMatrixError : public std::runtime_error {
public:
    SingularMatrixError(std::size_t row, double pivot)
        : std::runtime_error("singular banded matrix: pivot " + std::to_string(pivot) +
                             " at row " + std::to_string(row)),
          row_(row), pivot_(pivot) {}

    [[nodiscard]] std::size_t row() const noexcept { return row_; }
    [[nodiscard]] double pivot() const noexcept { return pivot_; }

private:
    std::size_t row_;
    double pivot_;
};

/// A time step could not be completed. Carries the time the step started from.
class StepFailure : public std::runtime_error {
public:
    StepFailure(double t, const std::string& what)
        : std::runtime_error("step from t=" + std::to_string(t) + " failed: " + what), t_(t) {}

    [[nodiscard]] double time() const noexcept { return t_; }

private:
    double t_;
};

/// Non-finite coefficients produced by a step
class DivergenceError : public StepFailure {
public:
    explicit DivergenceError(double t) : StepFailure(t, "non-finite spline coefficients") {}
};

}  // namespace grlw
