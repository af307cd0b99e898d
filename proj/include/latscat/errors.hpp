#pragma once

#include <stdexcept>
#include <string>

namespace latscat {

/// Bad user input: dimensions, energies outside the admissible band, malformed files.
class validation_error : public std::invalid_argument {
public:
    explicit validation_error(const std::string& msg) : std::invalid_argument(msg) {}
};

/// A numerical guarantee failed (quadrature did not converge, a gate tolerance
/// was exceeded, an internal consistency residual is too large).
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// The energy is (numerically) exceptional: a Dirichlet eigenvalue of the
/// interior problem, or a singular single-layer operator.
class exceptional_energy_error : public std::runtime_error {
public:
    explicit exceptional_energy_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace latscat
