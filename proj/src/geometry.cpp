#include "mcflow/geometry.hpp"

#include "mcflow/errors.hpp"
#include "mcflow/numerics.hpp"

#include <cmath>
#include <numbers>

namespace mcflow {

ParametrizedCurve circle_curve(double radius, double rotation, int ambient_dim) {
    auto [u, w] = circle_frame(ambient_dim, rotation);
    ParametrizedCurve c;
    c.name = "circle";
    c.ambient_dim = ambient_dim;
    c.position = [=](double t) -> Eigen::VectorXd {
        return radius * (std::cos(t) * u + std::sin(t) * w);
    };
    c.deriv1 = [=](double t) -> Eigen::VectorXd {
        return radius * (-std::sin(t) * u + std::cos(t) * w);
    };
    c.deriv2 = [=](double t) -> Eigen::VectorXd {
        return -radius * (std::cos(t) * u + std::sin(t) * w);
    };
    return c;
}

ParametrizedCurve ellipse_curve(double a, double b, int ambient_dim) {
    ParametrizedCurve c;
    c.name = "ellipse";
    c.ambient_dim = ambient_dim;
    c.position = [=](double t) -> Eigen::VectorXd {
        Eigen::VectorXd p = Eigen::VectorXd::Zero(ambient_dim);
        p[0] = a * std::cos(t);
        p[1] = b * std::sin(t);
        return p;
    };
    c.deriv1 = [=](double t) -> Eigen::VectorXd {
        Eigen::VectorXd p = Eigen::VectorXd::Zero(ambient_dim);
        p[0] = -a * std::sin(t);
        p[1] = b * std::cos(t);
        return p;
    };
    c.deriv2 = [=](double t) -> Eigen::VectorXd {
        Eigen::VectorXd p = Eigen::VectorXd::Zero(ambient_dim);
        p[0] = -a * std::cos(t);
        p[1] = -b * std::sin(t);
        return p;
    };
    return c;
}

ParametrizedCurve trefoil_curve(double scale) {
    if (scale <= 0.0)
        throw ConfigError("trefoil scale must be positive");
    ParametrizedCurve c;
    c.name = "trefoil";
    c.ambient_dim = 3;
    c.position = [=](double t) -> Eigen::VectorXd {
        const double f = 2.0 + std::cos(3 * t);
        Eigen::Vector3d p(f * std::cos(2 * t), f * std::sin(2 * t), std::sin(3 * t));
        return scale * p;
    };
    c.deriv1 = [=](double t) -> Eigen::VectorXd {
        const double f = 2.0 + std::cos(3 * t);
        const double fp = -3.0 * std::sin(3 * t);
        Eigen::Vector3d p(fp * std::cos(2 * t) - 2.0 * f * std::sin(2 * t),
                          fp * std::sin(2 * t) + 2.0 * f * std::cos(2 * t),
                          3.0 * std::cos(3 * t));
        return scale * p;
    };
    c.deriv2 = [=](double t) -> Eigen::VectorXd {
        const double f = 2.0 + std::cos(3 * t);
        const double fp = -3.0 * std::sin(3 * t);
        const double fpp = -9.0 * std::cos(3 * t);
        Eigen::Vector3d p(
            fpp * std::cos(2 * t) - 4.0 * fp * std::sin(2 * t) - 4.0 * f * std::cos(2 * t),
            fpp * std::sin(2 * t) + 4.0 * fp * std::cos(2 * t) - 4.0 * f * std::sin(2 * t),
            -9.0 * std::sin(3 * t));
        return scale * p;
    };
    return c;
}

ParametrizedCurve sinusoid_curve(double amplitude, int frequency) {
    if (frequency < 1)
        throw ConfigError("sinusoid frequency must be a positive integer");
    ParametrizedCurve c;
    c.name = "sinusoid";
    c.ambient_dim = 3;
    const double a = amplitude;
    const double f = frequency;
    c.position = [=](double t) -> Eigen::VectorXd {
        return Eigen::Vector3d(std::cos(t), std::sin(t), a * std::sin(f * t));
    };
    c.deriv1 = [=](double t) -> Eigen::VectorXd {
        return Eigen::Vector3d(-std::sin(t), std::cos(t), a * f * std::cos(f * t));
    };
    c.deriv2 = [=](double t) -> Eigen::VectorXd {
        return Eigen::Vector3d(-std::cos(t), -std::sin(t), -a * f * f * std::sin(f * t));
    };
    return c;
}

double angenent_curvature(double phi, double t) {
    if (t >= 0.0)
        throw ConfigError("Angenent oval is defined for absolute time t < 0");
    const double c = 1.0 / (std::exp(-2.0 * t) - 1.0);
    const double cos_phi = std::cos(phi);
    return std::sqrt(c + cos_phi * cos_phi);
}

ParametrizedCurve angenent_curve(double t) {
    if (t >= 0.0)
        throw ConfigError("Angenent oval is defined for absolute time t < 0");
    ParametrizedCurve c;
    c.name = "angenent";
    c.ambient_dim = 3;
    c.position = [=](double phi) -> Eigen::VectorXd {
        const auto fx = [=](double p) { return std::cos(p) / angenent_curvature(p, t); };
        const auto fy = [=](double p) { return std::sin(p) / angenent_curvature(p, t); };
        return Eigen::Vector3d(adaptive_simpson(fx, 0.0, phi, 1e-10),
                               adaptive_simpson(fy, 0.0, phi, 1e-10), 0.0);
    };
    c.deriv1 = [=](double phi) -> Eigen::VectorXd {
        const double k = angenent_curvature(phi, t);
        return Eigen::Vector3d(std::cos(phi) / k, std::sin(phi) / k, 0.0);
    };
    c.deriv2 = [=](double phi) -> Eigen::VectorXd {
        const double k = angenent_curvature(phi, t);
        const double kp = -std::sin(phi) * std::cos(phi) / k;
        return Eigen::Vector3d(-std::sin(phi) / k - std::cos(phi) * kp / (k * k),
                               std::cos(phi) / k - std::sin(phi) * kp / (k * k), 0.0);
    };
    return c;
}

ExactSolution circle_exact(double radius0, double rotation, int ambient_dim) {
    if (radius0 <= 0.0)
        throw ConfigError("circle radius must be positive");
    auto [u, w] = circle_frame(ambient_dim, rotation);
    const double horizon = 0.5 * radius0 * radius0;

    auto radius_at = [=](double t) {
        if (t >= horizon)
            throw ConfigError("shrinking circle queried at or past its collapse time");
        return std::sqrt(radius0 * radius0 - 2.0 * t);
    };

    ExactSolution sol;
    sol.name = "circle";
    sol.ambient_dim = ambient_dim;
    sol.horizon = horizon;
    sol.material = true;
    sol.position = [=](double theta, double t) -> Eigen::VectorXd {
        return radius_at(t) * (std::cos(theta) * u + std::sin(theta) * w);
    };
    sol.projection = [=](double theta, double) -> Eigen::MatrixXd {
        const Eigen::VectorXd tang = -std::sin(theta) * u + std::cos(theta) * w;
        return tang * tang.transpose();
    };
    sol.curvature = [=](double theta, double t) -> Eigen::VectorXd {
        return (-1.0 / radius_at(t)) * (std::cos(theta) * u + std::sin(theta) * w);
    };
    sol.velocity = sol.curvature;
    return sol;
}

ExactSolution angenent_oval(double t0) {
    if (t0 >= 0.0)
        throw ConfigError("Angenent oval initial time must satisfy t0 < 0");

    ExactSolution sol;
    sol.name = "angenent";
    sol.ambient_dim = 3;
    sol.horizon = -t0;
    sol.material = false;
    sol.position = [=](double phi, double t) -> Eigen::VectorXd {
        return angenent_curve(t0 + t).position(phi);
    };
    sol.projection = [=](double phi, double) -> Eigen::MatrixXd {
        const Eigen::Vector3d tang(std::cos(phi), std::sin(phi), 0.0);
        return tang * tang.transpose();
    };
    sol.curvature = [=](double phi, double t) -> Eigen::VectorXd {
        const double k = angenent_curvature(phi, t0 + t);
        return Eigen::Vector3d(-k * std::sin(phi), k * std::cos(phi), 0.0);
    };
    sol.velocity = sol.curvature;
    return sol;
}

Eigen::MatrixXd curve_projection(const ParametrizedCurve& curve, double theta) {
    const Eigen::VectorXd d1 = curve.deriv1(theta);
    const Eigen::VectorXd tang = d1 / d1.norm();
    return tang * tang.transpose();
}

Eigen::VectorXd curve_curvature(const ParametrizedCurve& curve, double theta) {
    const Eigen::VectorXd d1 = curve.deriv1(theta);
    const Eigen::VectorXd d2 = curve.deriv2(theta);
    const double g = d1.squaredNorm();
    return d2 / g - (d1.dot(d2) / (g * g)) * d1;
}

std::pair<PositionVector, StateVector> initial_data(const ParametrizedCurve& curve,
                                                    const CurveMesh& mesh) {
    const int n = mesh.ambient_dim;
    if (curve.ambient_dim != n)
        throw ConfigError("initial data: curve dimension does not match mesh");
    if (min_speed_sampled(curve) < 1e-8)
        throw MeshError("initial data: curve '" + curve.name + "' is not an immersion");

    PositionVector x(n, mesh.n_nodes());
    StateVector u = StateVector::zero(n, mesh.n_nodes());
    for (int j = 0; j < mesh.n_nodes(); ++j) {
        const double theta = mesh.node_params[j];
        const Eigen::VectorXd p = curve.position(theta);
        const Eigen::MatrixXd proj = curve_projection(curve, theta);
        const Eigen::VectorXd curv = curve_curvature(curve, theta);
        for (int c = 0; c < n; ++c) {
            x.at(c, j) = p[c];
            u.curv.at(c, j) = curv[c];
        }
        for (int beta = 0; beta < n; ++beta)
            for (int alpha = 0; alpha < n; ++alpha)
                u.proj.at(matrix_comp(alpha, beta, n), j) = proj(alpha, beta);
    }
    return {std::move(x), std::move(u)};
}

} // namespace mcflow
