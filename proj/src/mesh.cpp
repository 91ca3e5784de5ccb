#include "mcflow/mesh.hpp"

#include "mcflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace mcflow {

double min_speed_sampled(const ParametrizedCurve& curve, int n_samples) {
    const double two_pi = 2.0 * std::numbers::pi;
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_samples; ++i)
        m = std::min(m, curve.deriv1(i * two_pi / n_samples).norm());
    return m;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> circle_frame(int ambient_dim, double rotation) {
    const int n = ambient_dim;
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    if (n == 2) {
        u << std::cos(rotation), std::sin(rotation);
        w << -std::sin(rotation), std::cos(rotation);
    } else {
        u[1] = 1.0;
        w[0] = std::sin(rotation);
        w[2] = std::cos(rotation);
    }
    return {u, w};
}

namespace {

CurveMesh make_mesh_shell(int n_elements, int degree, int ambient_dim) {
    if (n_elements < 3)
        throw ConfigError("closed-curve mesh needs at least 3 elements, got " +
                          std::to_string(n_elements));
    if (ambient_dim < 2)
        throw ConfigError("ambient dimension must be >= 2, got " + std::to_string(ambient_dim));

    CurveMesh mesh;
    mesh.ambient_dim = ambient_dim;
    mesh.degree = degree;
    mesh.n_elements = n_elements;
    mesh.ref = build_reference_element(degree);
    mesh.node_params.resize(mesh.n_nodes());
    return mesh;
}

// Arc length of `curve` over [a, b] by an 8-point Gauss rule.
double arc_increment(const ParametrizedCurve& curve, const std::vector<QuadPoint>& rule,
                     double a, double b) {
    double s = 0.0;
    for (const auto& qp : rule)
        s += qp.weight * curve.deriv1(a + qp.xi * (b - a)).norm();
    return s * (b - a);
}

} // namespace

std::pair<CurveMesh, PositionVector>
build_circle_mesh(int n_elements, int degree, double radius, double plane_rotation,
                  int ambient_dim) {
    CurveMesh mesh = make_mesh_shell(n_elements, degree, ambient_dim);
    const int N = mesh.n_nodes();
    const double two_pi = 2.0 * std::numbers::pi;
    auto [u, w] = circle_frame(ambient_dim, plane_rotation);

    PositionVector x(ambient_dim, N);
    for (int j = 0; j < N; ++j) {
        const double theta = j * two_pi / N;
        mesh.node_params[j] = theta;
        const Eigen::VectorXd p = radius * (std::cos(theta) * u + std::sin(theta) * w);
        for (int c = 0; c < ambient_dim; ++c)
            x.at(c, j) = p[c];
    }
    return {std::move(mesh), std::move(x)};
}

std::pair<CurveMesh, PositionVector>
build_parametric_mesh(int n_elements, int degree, int ambient_dim,
                      const ParametrizedCurve& curve) {
    if (curve.ambient_dim != ambient_dim)
        throw ConfigError("curve '" + curve.name + "' lives in R^" +
                          std::to_string(curve.ambient_dim) + ", mesh requested R^" +
                          std::to_string(ambient_dim));

    CurveMesh mesh = make_mesh_shell(n_elements, degree, ambient_dim);
    const int N = mesh.n_nodes();
    const double two_pi = 2.0 * std::numbers::pi;

    if (min_speed_sampled(curve) < 1e-8)
        throw MeshError("curve '" + curve.name + "' is not an immersion (|X'| ~ 0)");

    // Cumulative arc-length table on a 64*E oversampling, composite Gauss per
    // cell so the table itself is accurate to machine precision.
    const int oversample = 64 * n_elements;
    const auto rule = gauss_legendre(8);
    std::vector<double> theta_grid(oversample + 1), s_grid(oversample + 1);
    s_grid[0] = 0.0;
    for (int i = 0; i <= oversample; ++i)
        theta_grid[i] = i * two_pi / oversample;
    for (int i = 0; i < oversample; ++i)
        s_grid[i + 1] = s_grid[i] + arc_increment(curve, rule, theta_grid[i], theta_grid[i + 1]);
    const double total_length = s_grid[oversample];

    PositionVector x(ambient_dim, N);
    for (int j = 0; j < N; ++j) {
        double theta = 0.0;
        if (j > 0) {
            const double target = j * total_length / N;
            const auto it = std::upper_bound(s_grid.begin(), s_grid.end(), target);
            int cell = static_cast<int>(it - s_grid.begin()) - 1;
            cell = std::clamp(cell, 0, oversample - 1);
            // Newton on s(theta) = target, s evaluated from the table cell.
            theta = theta_grid[cell] + (target - s_grid[cell]) /
                                           (s_grid[cell + 1] - s_grid[cell]) *
                                           (theta_grid[cell + 1] - theta_grid[cell]);
            for (int iter = 0; iter < 60; ++iter) {
                const double s_here =
                    s_grid[cell] + arc_increment(curve, rule, theta_grid[cell], theta);
                const double resid = s_here - target;
                if (std::abs(resid) < 1e-13 * std::max(1.0, total_length))
                    break;
                theta -= resid / curve.deriv1(theta).norm();
            }
        }
        mesh.node_params[j] = theta;
        const Eigen::VectorXd p = curve.position(theta);
        for (int c = 0; c < ambient_dim; ++c)
            x.at(c, j) = p[c];
    }
    return {std::move(mesh), std::move(x)};
}

MetricData metric_at_quad(const CurveMesh& mesh, const PositionVector& x,
                          double eps_degenerate) {
    const int n = mesh.ambient_dim;
    const int E = mesh.n_elements;
    const int nb = mesh.nodes_per_element();
    const int nq = mesh.ref.n_quad();
    if (x.components != n || x.node_count() != mesh.n_nodes())
        throw AssemblyError("position vector does not match mesh layout");

    MetricData md;
    md.sqrt_g.resize(E, nq);
    md.tangent.resize(E, Eigen::MatrixXd(n, nq));

    Eigen::MatrixXd xe(n, nb);
    for (int e = 0; e < E; ++e) {
        for (int a = 0; a < nb; ++a) {
            const int g = mesh.global_node(e, a);
            for (int c = 0; c < n; ++c)
                xe(c, a) = x.at(c, g);
        }
        const Eigen::MatrixXd deriv = xe * mesh.ref.dbasis_at_quad();
        for (int q = 0; q < nq; ++q) {
            const double sg = deriv.col(q).norm();
            if (!(sg > eps_degenerate))
                throw DegenerateElementError(
                    "element " + std::to_string(e) + " degenerated (sqrt(g) = " +
                    std::to_string(sg) + ")");
            md.sqrt_g(e, q) = sg;
            md.tangent[e].col(q) = deriv.col(q) / sg;
        }
    }
    return md;
}

double discrete_length(const CurveMesh& mesh, const PositionVector& x) {
    const MetricData md = metric_at_quad(mesh, x);
    double length = 0.0;
    for (int e = 0; e < mesh.n_elements; ++e)
        for (int q = 0; q < mesh.ref.n_quad(); ++q)
            length += mesh.ref.quad()[q].weight * md.sqrt_g(e, q);
    return length;
}

Eigen::VectorXd eval_field(const CurveMesh& mesh, const NodalField& field, int element,
                           double xi) {
    const Eigen::VectorXd phi = mesh.ref.eval_basis(xi);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(field.components);
    for (int a = 0; a < mesh.nodes_per_element(); ++a) {
        const int g = mesh.global_node(element, a);
        for (int c = 0; c < field.components; ++c)
            out[c] += phi[a] * field.at(c, g);
    }
    return out;
}

std::string snapshot_csv_header(int ambient_dim) {
    std::string header = "t,node";
    for (int c = 0; c < ambient_dim; ++c)
        header += ",comp" + std::to_string(c);
    header += "\n";
    return header;
}

void append_snapshot_csv(std::string& out, double t, const CurveMesh& mesh,
                         const PositionVector& x) {
    char buf[64];
    for (int j = 0; j < mesh.n_nodes(); ++j) {
        std::snprintf(buf, sizeof(buf), "%.17g", t);
        out += buf;
        out += ',';
        out += std::to_string(j);
        for (int c = 0; c < mesh.ambient_dim; ++c) {
            std::snprintf(buf, sizeof(buf), ",%.17g", x.at(c, j));
            out += buf;
        }
        out += '\n';
    }
}

} // namespace mcflow
