#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "mottbox/vec3.hpp"

namespace mottbox {

// Gauss-Legendre nodes and weights on [-1, 1], nodes ascending.
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Returns the n-point rule (n >= 1). Rules are computed once by Newton
// iteration on P_n and cached; the returned object is immutable and safe to
// share between threads.
std::shared_ptr<const GaussLegendreRule> gauss_legendre(int n);

// n-point Gauss-Legendre estimate of the integral of f over [lo, hi].
// Exact up to rounding for polynomials of degree <= 2n - 1.
// Throws NonFiniteIntegrand (carrying the abscissa) if f returns NaN/Inf,
// ValidationError if n < 2 or the bounds are not finite.
double quad_1d(const std::function<double(double)>& f, double lo, double hi, int n);

// Tensor-product Gauss-Legendre estimate of the integral of f over the cube
// [-half_width, half_width]^3 with n_per_axis nodes per axis. The integrand
// is expected to have decayed at the cube faces.
Complex quad_3d(const std::function<Complex(const Vec3&)>& f, double half_width, int n_per_axis);

}  // namespace mottbox
