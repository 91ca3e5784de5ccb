#include "mcflow/analysis.hpp"

#include "mcflow/errors.hpp"

#include <cmath>
#include <limits>

namespace mcflow {

Norms discrete_norms(const SurfaceOperators& ops, const NodalField& e) {
    if (ops.mass.rows() != e.node_count())
        throw AssemblyError("discrete_norms: field does not match operator size");
    double l2_sq = 0.0, semi_sq = 0.0;
    for (int c = 0; c < e.components; ++c) {
        const Eigen::VectorXd ec = e.comp(c);
        l2_sq += ec.dot(ops.mass * ec);
        semi_sq += ec.dot(ops.stiffness * ec);
    }
    return {std::sqrt(std::max(0.0, l2_sq)), std::sqrt(std::max(0.0, l2_sq + semi_sq))};
}

Norms discrete_norms(const CurveMesh& mesh, const PositionVector& x, const NodalField& e) {
    return discrete_norms(assemble_operators(mesh, x), e);
}

ErrorRecord error_vs_exact(const CurveMesh& mesh, const PositionVector& x,
                           const StateVector& u, const NodalField& v,
                           const ExactSolution& exact, double t) {
    const int n = mesh.ambient_dim;
    if (!exact.material)
        throw ConfigError("error_vs_exact: exact solution '" + exact.name +
                          "' does not track material points");
    if (t >= exact.horizon)
        throw ConfigError("error_vs_exact: t is beyond the exact solution's horizon");

    NodalField ex(n, mesh.n_nodes());
    NodalField ev(n, mesh.n_nodes());
    NodalField epi(n * n, mesh.n_nodes());
    NodalField eh(n, mesh.n_nodes());
    for (int j = 0; j < mesh.n_nodes(); ++j) {
        const double theta = mesh.node_params[j];
        const Eigen::VectorXd px = exact.position(theta, t);
        const Eigen::VectorXd ph = exact.curvature(theta, t);
        const Eigen::VectorXd pv = exact.velocity(theta, t);
        const Eigen::MatrixXd pp = exact.projection(theta, t);
        for (int c = 0; c < n; ++c) {
            ex.at(c, j) = x.at(c, j) - px[c];
            ev.at(c, j) = v.at(c, j) - pv[c];
            eh.at(c, j) = u.curv.at(c, j) - ph[c];
        }
        for (int beta = 0; beta < n; ++beta)
            for (int alpha = 0; alpha < n; ++alpha) {
                const int c = matrix_comp(alpha, beta, n);
                epi.at(c, j) = u.proj.at(c, j) - pp(alpha, beta);
            }
    }

    const SurfaceOperators ops = assemble_operators(mesh, x);
    const MetricData md = metric_at_quad(mesh, x);
    double length = 0.0;
    for (int e = 0; e < mesh.n_elements; ++e)
        for (int q = 0; q < mesh.ref.n_quad(); ++q)
            length += mesh.ref.quad()[q].weight * md.sqrt_g(e, q);

    ErrorRecord rec;
    rec.t = t;
    rec.x = discrete_norms(ops, ex);
    rec.v = discrete_norms(ops, ev);
    rec.proj = discrete_norms(ops, epi);
    rec.curv = discrete_norms(ops, eh);
    rec.length = length;
    rec.min_sqrt_g = md.min_sqrt_g();
    return rec;
}

EOCTable eoc(const std::vector<std::pair<double, double>>& levels) {
    if (levels.size() < 2)
        throw ConfigError("EOC needs at least 2 levels, got " + std::to_string(levels.size()));
    EOCTable table;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const auto [p, e] = levels[i];
        if (p <= 0.0)
            throw ConfigError("EOC parameters must be positive");
        if (i > 0 && p >= levels[i - 1].first)
            throw ConfigError("EOC parameters must decrease monotonically");
        table.parameter.push_back(p);
        table.error.push_back(e);
    }
    for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
        const double e0 = levels[i].second, e1 = levels[i + 1].second;
        const double p0 = levels[i].first, p1 = levels[i + 1].first;
        if (e0 <= 0.0 || e1 <= 0.0)
            table.order.push_back(std::numeric_limits<double>::quiet_NaN());
        else
            table.order.push_back(std::log(e0 / e1) / std::log(p0 / p1));
    }
    return table;
}

PiDiagnostics pi_diagnostics(const NodalField& proj, int ambient_dim) {
    const int n = ambient_dim;
    if (proj.components != n * n)
        throw AssemblyError("pi_diagnostics: expected an n x n matrix field");
    PiDiagnostics diag;
    Eigen::MatrixXd p(n, n);
    for (int j = 0; j < proj.node_count(); ++j) {
        for (int beta = 0; beta < n; ++beta)
            for (int alpha = 0; alpha < n; ++alpha)
                p(alpha, beta) = proj.at(matrix_comp(alpha, beta, n), j);
        diag.max_asymmetry = std::max(diag.max_asymmetry, (p - p.transpose()).norm());
        diag.max_idempotency_defect = std::max(diag.max_idempotency_defect, (p * p - p).norm());
        diag.max_trace_defect = std::max(diag.max_trace_defect, std::abs(p.trace() - 1.0));
    }
    return diag;
}

double idempotency_defect(const Eigen::MatrixXd& m) { return (m * m - m).norm(); }

Eigen::MatrixXd idempotency_correct(const Eigen::MatrixXd& proj_matrix, double tol) {
    if (!proj_matrix.allFinite())
        throw AssemblyError("idempotency correction received non-finite input");
    if (idempotency_defect(proj_matrix) <= tol)
        return proj_matrix;

    const int n = static_cast<int>(proj_matrix.rows());
    const Eigen::MatrixXd sym = 0.5 * (proj_matrix + proj_matrix.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    if (es.info() != Eigen::Success)
        throw AssemblyError("idempotency correction: eigendecomposition failed");

    const Eigen::VectorXd lambda = es.eigenvalues(); // ascending
    Eigen::VectorXd snapped = Eigen::VectorXd::Zero(n);
    const bool separated = n >= 2 && (lambda[n - 1] - lambda[n - 2] > 0.1);
    if (separated) {
        // Rank-1 target well identified: keep exactly one unit eigenvalue.
        snapped[n - 1] = 1.0;
    } else {
        int ones = 0;
        for (int i = n - 1; i >= 0; --i) {
            if (lambda[i] > 0.5)
                snapped[i] = 1.0;
            else if (lambda[i] == 0.5 && ones < 1)
                snapped[i] = 1.0;
            if (snapped[i] == 1.0)
                ++ones;
        }
    }

    Eigen::MatrixXd out =
        es.eigenvectors() * snapped.asDiagonal() * es.eigenvectors().transpose();
    out = 0.5 * (out + out.transpose());
    return out;
}

} // namespace mcflow
