#pragma once

#include <functional>

namespace mcflow {

/// Adaptive Simpson quadrature of f over [a, b] to the given absolute
/// tolerance. Intended for smooth integrands (arc lengths, oval closures).
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10);

/// Central difference d/dx f at x with step h.
inline double central_diff1(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Central second difference d^2/dx^2 f at x with step h.
inline double central_diff2(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

} // namespace mcflow
