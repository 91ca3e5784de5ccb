#include "mcflow/refelem.hpp"

#include "mcflow/errors.hpp"

#include <cmath>
#include <numbers>

namespace mcflow {

std::vector<QuadPoint> gauss_legendre(int n_points) {
    if (n_points < 1)
        throw ConfigError("gauss_legendre: need at least one point, got " +
                          std::to_string(n_points));

    // Newton iteration on P_n over [-1,1], then map to [0,1].
    std::vector<QuadPoint> rule(n_points);
    const int n = n_points;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Legendre recurrence: (j+1) P_{j+1} = (2j+1) x P_j - j P_{j-1}
            double p0 = 1.0, p1 = x;
            for (int j = 1; j < n; ++j) {
                const double p2 = ((2 * j + 1) * x * p1 - j * p0) / (j + 1);
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15)
                break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule[i] = {0.5 * (1.0 - x), 0.5 * w};
        rule[n - 1 - i] = {0.5 * (1.0 + x), 0.5 * w};
    }
    return rule;
}

namespace {

double lagrange_value(const std::vector<double>& nodes, int a, double xi) {
    double v = 1.0;
    for (std::size_t b = 0; b < nodes.size(); ++b) {
        if (static_cast<int>(b) == a)
            continue;
        v *= (xi - nodes[b]) / (nodes[a] - nodes[b]);
    }
    return v;
}

double lagrange_derivative(const std::vector<double>& nodes, int a, double xi) {
    double sum = 0.0;
    for (std::size_t b = 0; b < nodes.size(); ++b) {
        if (static_cast<int>(b) == a)
            continue;
        double term = 1.0 / (nodes[a] - nodes[b]);
        for (std::size_t c = 0; c < nodes.size(); ++c) {
            if (static_cast<int>(c) == a || c == b)
                continue;
            term *= (xi - nodes[c]) / (nodes[a] - nodes[c]);
        }
        sum += term;
    }
    return sum;
}

} // namespace

Eigen::VectorXd ReferenceElement::eval_basis(double xi) const {
    Eigen::VectorXd out(n_basis());
    for (int a = 0; a < n_basis(); ++a)
        out[a] = lagrange_value(nodes_, a, xi);
    return out;
}

Eigen::VectorXd ReferenceElement::eval_dbasis(double xi) const {
    Eigen::VectorXd out(n_basis());
    for (int a = 0; a < n_basis(); ++a)
        out[a] = lagrange_derivative(nodes_, a, xi);
    return out;
}

ReferenceElement build_reference_element(int degree, int n_quad) {
    if (degree < 1 || degree > 4)
        throw ConfigError("reference element degree must be in 1..4, got " +
                          std::to_string(degree));
    if (n_quad < degree + 1)
        throw ConfigError("reference element needs at least k+1 quadrature points, got " +
                          std::to_string(n_quad));

    ReferenceElement el;
    el.degree_ = degree;
    el.nodes_.resize(degree + 1);
    for (int a = 0; a <= degree; ++a)
        el.nodes_[a] = static_cast<double>(a) / degree;
    el.quad_ = gauss_legendre(n_quad);

    el.basis_at_quad_.resize(degree + 1, n_quad);
    el.dbasis_at_quad_.resize(degree + 1, n_quad);
    for (int q = 0; q < n_quad; ++q) {
        el.basis_at_quad_.col(q) = el.eval_basis(el.quad_[q].xi);
        el.dbasis_at_quad_.col(q) = el.eval_dbasis(el.quad_[q].xi);
    }
    return el;
}

ReferenceElement build_reference_element(int degree) {
    return build_reference_element(degree, degree + 2);
}

} // namespace mcflow
