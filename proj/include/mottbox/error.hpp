#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mottbox {

// Raised when an input violates a documented precondition. The CLI maps it
// to exit status 2.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Raised by the quadrature routines when the integrand returns NaN or Inf.
class NonFiniteIntegrand : public std::runtime_error {
public:
    NonFiniteIntegrand(const std::string& what, std::vector<double> point)
        : std::runtime_error(what), point_(std::move(point)) {}

    // Abscissa (1D) or sample point (3D) at which the integrand failed.
    const std::vector<double>& point() const noexcept { return point_; }

private:
    std::vector<double> point_;
};

}  // namespace mottbox

namespace mottbox {

// A field was evaluated at the emitter or at an obstacle centre.
class SingularPoint : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace mottbox
