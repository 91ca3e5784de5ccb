#include "mcflow/baseline.hpp"

#include "mcflow/errors.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <limits>

namespace mcflow {

DziukOutcome dziuk_step(const CurveMesh& mesh, const DziukHistory& history,
                        const BDFScheme& scheme, const StepOptions& options) {
    if (!history.full())
        throw SolverError("baseline step requested on a partially filled history");
    const int q = scheme.order;
    const double tau = history.tau;
    const int n = mesh.ambient_dim;
    const int N = mesh.n_nodes();

    PositionVector xt = history.x[0];
    xt.values *= scheme.gamma[0];
    for (int j = 1; j < q; ++j)
        xt.values += scheme.gamma[j] * history.x[j].values;

    const MetricData metric = metric_at_quad(mesh, xt);
    const SurfaceOperators ops = assemble_operators(mesh, metric);
    Eigen::SparseMatrix<double> lhs = scheme.delta[0] * ops.mass + tau * ops.stiffness;
    lhs.makeCompressed();
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> solver;
    solver.compute(lhs);
    if (solver.info() != Eigen::Success)
        throw SolverError("Cholesky factorization of the baseline step matrix failed");

    NodalField hist(n, N);
    for (int j = 1; j <= q; ++j)
        hist.values += scheme.delta[j] * history.x[j - 1].values;
    const NodalField m_hist = apply_blocked(ops.mass, hist);

    DziukOutcome out;
    out.x = PositionVector(n, N);
    out.v = NodalField(n, N);
    for (int c = 0; c < n; ++c) {
        const Eigen::VectorXd b = -m_hist.comp(c);
        Eigen::VectorXd sol = solver.solve(b);
        const double bnorm = std::max(b.norm(), 1e-300);
        double rel = (lhs * sol - b).norm() / bnorm;
        if (rel > options.solver_rel_tol) {
            sol += solver.solve(b - lhs * sol);
            rel = (lhs * sol - b).norm() / bnorm;
            if (rel > options.solver_rel_tol)
                throw SolverError("baseline solve residual " + std::to_string(rel) +
                                  " exceeds tolerance");
        }
        out.x.comp(c) = sol;
        out.v.comp(c) = (scheme.delta[0] * sol + hist.comp(c)) / tau;
    }
    if (!out.x.values.allFinite())
        throw DegenerateElementError("baseline state became non-finite");
    out.min_sqrt_g = metric.min_sqrt_g();
    return out;
}

DziukHistory dziuk_startup(const CurveMesh& mesh, const PositionVector& x0,
                           const BDFScheme& scheme, double tau, const StepOptions& options,
                           const ExactSolution* exact) {
    const int q = scheme.order;
    DziukHistory history;
    history.order = q;
    history.tau = tau;
    history.push(x0, 0.0);
    if (q == 1)
        return history;

    if (exact != nullptr && exact->material) {
        const int n = mesh.ambient_dim;
        for (int i = 1; i < q; ++i) {
            const double t = i * tau;
            PositionVector xi(n, mesh.n_nodes());
            for (int j = 0; j < mesh.n_nodes(); ++j) {
                const Eigen::VectorXd p = exact->position(mesh.node_params[j], t);
                for (int c = 0; c < n; ++c)
                    xi.at(c, j) = p[c];
            }
            history.push(std::move(xi), t);
        }
        return history;
    }

    const BDFScheme euler = bdf_coefficients(1);
    const int n_sub = startup_substeps(tau, q);
    DziukHistory sub;
    sub.order = 1;
    sub.tau = tau / n_sub;
    sub.push(x0, 0.0);
    for (int i = 1; i < q; ++i) {
        for (int s = 0; s < n_sub; ++s) {
            DziukOutcome out = dziuk_step(mesh, sub, euler, options);
            sub.push(std::move(out.x), (i - 1) * tau + (s + 1) * sub.tau);
        }
        history.push(sub.x[0], i * tau);
    }
    return history;
}

namespace {

FlowRecord dziuk_record(const CurveMesh& mesh, long step_index, double t,
                        const PositionVector& x, const NodalField& v,
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

    if (exact != nullptr && exact->material && t < exact->horizon) {
        const int n = mesh.ambient_dim;
        NodalField ex(n, mesh.n_nodes()), ev(n, mesh.n_nodes());
        for (int j = 0; j < mesh.n_nodes(); ++j) {
            const Eigen::VectorXd px = exact->position(mesh.node_params[j], t);
            const Eigen::VectorXd pv = exact->velocity(mesh.node_params[j], t);
            for (int c = 0; c < n; ++c) {
                ex.at(c, j) = x.at(c, j) - px[c];
                ev.at(c, j) = v.at(c, j) - pv[c];
            }
        }
        const SurfaceOperators ops = assemble_operators(mesh, md);
        ErrorRecord err;
        err.t = t;
        err.x = discrete_norms(ops, ex);
        err.v = discrete_norms(ops, ev);
        const double nan = std::numeric_limits<double>::quiet_NaN();
        err.proj = {nan, nan};
        err.curv = {nan, nan};
        err.length = length;
        err.min_sqrt_g = rec.min_sqrt_g;
        rec.errors = err;
    }
    return rec;
}

} // namespace

FlowResult run_dziuk(const CurveMesh& mesh, const PositionVector& x0,
                     const BDFScheme& scheme, double tau, double T,
                     const RunOptions& options) {
    if (tau <= 0.0 || T <= 0.0 || tau > T)
        throw ConfigError("run_dziuk needs 0 < tau <= T");
    const long n_steps = static_cast<long>(std::ceil(T / tau - 1e-9));
    const long stride = std::max<long>(1, options.record_stride);
    const int q = scheme.order;
    const int n = mesh.ambient_dim;

    FlowResult result;
    auto snapshot = [&](long s, double t, const PositionVector& x) {
        if (options.snapshot_stride > 0 && (s % options.snapshot_stride == 0 || s == n_steps))
            result.snapshots.emplace_back(t, x);
    };

    DziukHistory history;
    try {
        history = dziuk_startup(mesh, x0, scheme, tau, options.step, options.exact);
    } catch (const DegenerateElementError& e) {
        result.stop = StopReason::singularity;
        result.stop_message = std::string("startup: ") + e.what();
    } catch (const SolverError& e) {
        result.stop = StopReason::solver_failure;
        result.stop_message = std::string("startup: ") + e.what();
    }
    if (!result.stop_message.empty()) {
        result.final_x = x0;
        result.final_u = StateVector::zero(n, mesh.n_nodes());
        return result;
    }

    // Startup rows carry geometry only; the baseline has no velocity yet.
    const NodalField zero_v(n, mesh.n_nodes());
    for (long i = 0; i < q && i <= n_steps; ++i) {
        if (i % stride == 0 || i == n_steps)
            result.records.push_back(
                dziuk_record(mesh, i, i * tau, history.x[q - 1 - i], zero_v, nullptr));
        snapshot(i, i * tau, history.x[q - 1 - i]);
    }
    result.steps_completed = std::min<long>(q - 1, n_steps);

    for (long s = q; s <= n_steps; ++s) {
        const double t = s * tau;
        DziukOutcome out;
        try {
            out = dziuk_step(mesh, history, scheme, options.step);
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
        history.push(std::move(out.x), t);
        result.steps_completed = s;
        if (s % stride == 0 || s == n_steps)
            result.records.push_back(
                dziuk_record(mesh, s, t, history.x[0], out.v, options.exact));
        snapshot(s, t, history.x[0]);
    }

    result.final_time = result.steps_completed * tau;
    result.final_x = history.x[0];
    result.final_u = StateVector::zero(n, mesh.n_nodes());
    return result;
}

ComparePair compare_runs(const CurveMesh& mesh, const PositionVector& x0,
                         const StateVector& u0, const BDFScheme& scheme, double tau,
                         double T, const RunOptions& options) {
    ComparePair pair;
    pair.coupled = run_flow(mesh, x0, u0, scheme, tau, T, options);
    pair.dziuk = run_dziuk(mesh, x0, scheme, tau, T, options);
    return pair;
}

} // namespace mcflow
