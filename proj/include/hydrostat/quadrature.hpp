#pragma once

#include <functional>
#include <stdexcept>
#include <string>

// Adaptive Gauss-Kronrod (7-15) quadrature; improper integrals over (0,inf)
// are mapped to a finite interval by s = scale * tan(theta).

namespace hydrostat {

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int subdivisions = 0;
};

// Integrate f over [a, b] to the requested tolerances; throws
// QuadratureError when the error estimate cannot be met.
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, double rel_tol = 1e-9,
                           double abs_tol = 1e-14, int max_depth = 250);

// Integrate f over (0, inf) via s = scale * tan(theta), theta in (0, pi/2).
QuadratureResult integrate_half_line(const std::function<double(double)>& f,
                                     double scale, double rel_tol = 1e-9,
                                     double abs_tol = 1e-14);

}  // namespace hydrostat
