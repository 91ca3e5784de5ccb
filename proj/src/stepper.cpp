#include "mcflow/stepper.hpp"

#include "mcflow/errors.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>

namespace mcflow {

std::pair<PositionVector, StateVector> extrapolate(const History& history,
                                                   const BDFScheme& scheme) {
    if (!history.full())
        throw SolverError("extrapolation requested on a partially filled history");
    const int q = scheme.order;
    PositionVector xt = history.x[0];
    StateVector ut = history.u[0];
    xt.values *= scheme.gamma[0];
    ut.proj.values *= scheme.gamma[0];
    ut.curv.values *= scheme.gamma[0];
    for (int j = 1; j < q; ++j) {
        xt.values += scheme.gamma[j] * history.x[j].values;
        ut.proj.values += scheme.gamma[j] * history.u[j].proj.values;
        ut.curv.values += scheme.gamma[j] * history.u[j].curv.values;
    }
    return {std::move(xt), std::move(ut)};
}

namespace {

void correct_projection_block(NodalField& proj, int n, double tol) {
    Eigen::MatrixXd p(n, n);
    for (int j = 0; j < proj.node_count(); ++j) {
        for (int beta = 0; beta < n; ++beta)
            for (int alpha = 0; alpha < n; ++alpha)
                p(alpha, beta) = proj.at(matrix_comp(alpha, beta, n), j);
        if (idempotency_defect(p) <= tol)
            continue;
        const Eigen::MatrixXd c = idempotency_correct(p, tol);
        for (int beta = 0; beta < n; ++beta)
            for (int alpha = 0; alpha < n; ++alpha)
                proj.at(matrix_comp(alpha, beta, n), j) = c(alpha, beta);
    }
}

} // namespace

StepOutcome step(const CurveMesh& mesh, const History& history, const BDFScheme& scheme,
                 const StepOptions& options) {
    const int q = scheme.order;
    const double tau = history.tau;
    const int n = mesh.ambient_dim;
    const int N = mesh.n_nodes();
    const int n_proj = n * n;
    const int n_comp = n_proj + n;

    auto [xt, ut] = extrapolate(history, scheme);
    if (options.idempotency_correction)
        correct_projection_block(ut.proj, n, options.idempotency_tol);

    const MetricData metric = metric_at_quad(mesh, xt);
    const SurfaceOperators ops = assemble_operators(mesh, metric);
    const NodalField f_proj = assemble_projection_rhs(mesh, metric, ut.proj);
    const NodalField f_curv = assemble_curvature_rhs(mesh, metric, ut.proj, ut.curv);

    // History combination sum_{j=1..q} delta_j u^{n-j}, applied blockwise by M.
    NodalField hist_proj(n_proj, N), hist_curv(n, N);
    for (int j = 1; j <= q; ++j) {
        hist_proj.values += scheme.delta[j] * history.u[j - 1].proj.values;
        hist_curv.values += scheme.delta[j] * history.u[j - 1].curv.values;
    }
    const NodalField m_hist_proj = apply_blocked(ops.mass, hist_proj);
    const NodalField m_hist_curv = apply_blocked(ops.mass, hist_curv);

    Eigen::SparseMatrix<double> lhs = scheme.delta[0] * ops.mass + tau * ops.stiffness;
    lhs.makeCompressed();

    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> solver;
    solver.compute(lhs);
    if (solver.info() != Eigen::Success)
        throw SolverError("Cholesky factorization of the step matrix failed");

    Eigen::MatrixXd rhs(N, n_comp);
    for (int c = 0; c < n_proj; ++c)
        rhs.col(c) = tau * f_proj.comp(c) - m_hist_proj.comp(c);
    for (int c = 0; c < n; ++c)
        rhs.col(n_proj + c) = tau * f_curv.comp(c) - m_hist_curv.comp(c);

    Eigen::MatrixXd sol = solver.solve(rhs);

    // One pass of iterative refinement wherever the residual is above
    // tolerance, then fail hard if it still is.
    double max_rel = 0.0;
    for (int c = 0; c < n_comp; ++c) {
        const double bnorm = std::max(rhs.col(c).norm(), 1e-300);
        double rel = (lhs * sol.col(c) - rhs.col(c)).norm() / bnorm;
        if (rel > options.solver_rel_tol) {
            sol.col(c) += solver.solve(rhs.col(c) - lhs * sol.col(c));
            rel = (lhs * sol.col(c) - rhs.col(c)).norm() / bnorm;
            if (rel > options.solver_rel_tol)
                throw SolverError("component solve residual " + std::to_string(rel) +
                                  " exceeds tolerance");
        }
        max_rel = std::max(max_rel, rel);
    }

    StepOutcome out;
    out.u = StateVector::zero(n, N);
    for (int c = 0; c < n_proj; ++c)
        out.u.proj.comp(c) = sol.col(c);
    for (int c = 0; c < n; ++c)
        out.u.curv.comp(c) = sol.col(n_proj + c);

    // The velocity law is an identity: the curvature block of u.
    out.v = out.u.curv;

    out.x = PositionVector(n, N);
    for (int c = 0; c < n; ++c) {
        Eigen::VectorXd acc = tau * out.v.comp(c);
        for (int j = 1; j <= q; ++j)
            acc -= scheme.delta[j] * history.x[j - 1].comp(c);
        out.x.comp(c) = acc / scheme.delta[0];
    }

    if (!out.x.values.allFinite() || !out.u.proj.values.allFinite() ||
        !out.u.curv.values.allFinite())
        throw DegenerateElementError("state became non-finite (geometric blow-up)");

    out.min_sqrt_g = metric.min_sqrt_g();
    out.max_solver_residual = max_rel;
    out.system_fingerprint = fingerprint(lhs);
    return out;
}

int startup_substeps(double tau, int order) {
    if (order <= 1 || tau >= 1.0)
        return 1;
    // Backward-Euler local error tau_sub^2 kept below tau^{q+1/2} per step.
    const double exponent = (3.0 - 2.0 * order) / 4.0;
    return std::max(1, static_cast<int>(std::ceil(std::pow(tau, exponent))));
}

History startup(const CurveMesh& mesh, const PositionVector& x0, const StateVector& u0,
                const BDFScheme& scheme, double tau, const StepOptions& options,
                const ExactSolution* exact) {
    const int q = scheme.order;
    const int n = mesh.ambient_dim;
    History history;
    history.order = q;
    history.tau = tau;
    history.push(x0, u0, 0.0);
    if (q == 1)
        return history;

    if (exact != nullptr && exact->material) {
        for (int i = 1; i < q; ++i) {
            const double t = i * tau;
            PositionVector xi(n, mesh.n_nodes());
            StateVector ui = StateVector::zero(n, mesh.n_nodes());
            for (int j = 0; j < mesh.n_nodes(); ++j) {
                const double theta = mesh.node_params[j];
                const Eigen::VectorXd p = exact->position(theta, t);
                const Eigen::VectorXd h = exact->curvature(theta, t);
                const Eigen::MatrixXd pr = exact->projection(theta, t);
                for (int c = 0; c < n; ++c) {
                    xi.at(c, j) = p[c];
                    ui.curv.at(c, j) = h[c];
                }
                for (int beta = 0; beta < n; ++beta)
                    for (int alpha = 0; alpha < n; ++alpha)
                        ui.proj.at(matrix_comp(alpha, beta, n), j) = pr(alpha, beta);
            }
            history.push(std::move(xi), std::move(ui), t);
        }
        return history;
    }

    const BDFScheme euler = bdf_coefficients(1);
    const int n_sub = startup_substeps(tau, q);
    History sub;
    sub.order = 1;
    sub.tau = tau / n_sub;
    sub.push(x0, u0, 0.0);
    for (int i = 1; i < q; ++i) {
        for (int s = 0; s < n_sub; ++s) {
            StepOutcome out = step(mesh, sub, euler, options);
            sub.push(std::move(out.x), std::move(out.u),
                     (i - 1) * tau + (s + 1) * sub.tau);
        }
        history.push(sub.x[0], sub.u[0], i * tau);
    }
    return history;
}

namespace {

FlowRecord make_record(const CurveMesh& mesh, long step_index, double t,
                       const PositionVector& x, const StateVector& u, const NodalField& v,
                       const ExactSolution* exact) {
    FlowRecord rec;
    rec.step = step_index;
    rec.t = t;
    const MetricData md = metric_at_quad(mesh, x);
    double length = 0.0;
    for (int e = 0; e < mesh.n_elements; ++e)
        for (int q = 0; q < mesh.ref.n_quad(); ++q)
            length += mesh.ref.quad()[q].weight * md.sqrt_g(e, q);
    rec.length = length;
    rec.min_sqrt_g = md.min_sqrt_g();
    if (exact != nullptr && exact->material && t < exact->horizon)
        rec.errors = error_vs_exact(mesh, x, u, v, *exact, t);
    return rec;
}

} // namespace

FlowResult run_flow(const CurveMesh& mesh, const PositionVector& x0, const StateVector& u0,
                    const BDFScheme& scheme, double tau, double T,
                    const RunOptions& options) {
    if (tau <= 0.0 || T <= 0.0 || tau > T)
        throw ConfigError("run_flow needs 0 < tau <= T");
    const long n_steps = static_cast<long>(std::ceil(T / tau - 1e-9));
    const long stride = std::max<long>(1, options.record_stride);
    const int q = scheme.order;

    FlowResult result;
    auto record = [&](long s, double t, const PositionVector& x, const StateVector& u,
                      const NodalField& v) {
        result.records.push_back(make_record(mesh, s, t, x, u, v, options.exact));
        if (options.observer)
            options.observer(s, t, x, u, v);
    };
    auto snapshot = [&](long s, double t, const PositionVector& x) {
        if (options.snapshot_stride > 0 && (s % options.snapshot_stride == 0 || s == n_steps))
            result.snapshots.emplace_back(t, x);
    };

    History history;
    try {
        history = startup(mesh, x0, u0, scheme, tau, options.step, options.exact);
    } catch (const DegenerateElementError& e) {
        result.stop = StopReason::singularity;
        result.stop_message = std::string("startup: ") + e.what();
    } catch (const SolverError& e) {
        result.stop = StopReason::solver_failure;
        result.stop_message = std::string("startup: ") + e.what();
    }
    if (!result.stop_message.empty()) {
        result.final_x = x0;
        result.final_u = u0;
        return result;
    }

    for (long i = 0; i < q && i <= n_steps; ++i) {
        const PositionVector& xi = history.x[q - 1 - i];
        const StateVector& ui = history.u[q - 1 - i];
        if (i % stride == 0 || i == n_steps)
            record(i, i * tau, xi, ui, ui.curv);
        snapshot(i, i * tau, xi);
    }
    result.steps_completed = std::min<long>(q - 1, n_steps);

    for (long s = q; s <= n_steps; ++s) {
        const double t = s * tau;
        StepOutcome out;
        try {
            out = step(mesh, history, scheme, options.step);
        } catch (const DegenerateElementError& e) {
            result.stop = StopReason::singularity;
            result.stop_message =
                "step " + std::to_string(s) + " (t = " + std::to_string(t) + "): " + e.what();
            break;
        } catch (const SolverError& e) {
            result.stop = StopReason::solver_failure;
            result.stop_message =
                "step " + std::to_string(s) + " (t = " + std::to_string(t) + "): " + e.what();
            break;
        }
        history.push(std::move(out.x), std::move(out.u), t);
        result.steps_completed = s;
        if (s % stride == 0 || s == n_steps)
            record(s, t, history.x[0], history.u[0], history.u[0].curv);
        snapshot(s, t, history.x[0]);
    }

    result.final_time = result.steps_completed * tau;
    result.final_x = history.x[0];
    result.final_u = history.u[0];
    return result;
}

} // namespace mcflow
