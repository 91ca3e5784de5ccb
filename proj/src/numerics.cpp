#include "mcflow/numerics.hpp"

#include "mcflow/errors.hpp"

#include <cmath>

namespace mcflow {

namespace {

double simpson(double fa, double fm, double fb, double a, double b) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double b, double fa,
                     double fm, double fb, double whole, double tol, int depth) {
    if (depth > 60)
        throw SolverError("adaptive quadrature failed to converge");
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(fa, flm, fm, a, m);
    const double right = simpson(fm, frm, fb, m, b);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol) {
    if (a == b)
        return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    return adaptive_step(f, a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, 0);
}

} // namespace mcflow
