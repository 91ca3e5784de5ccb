#pragma once

#include "mcflow/analysis.hpp"
#include "mcflow/assembly.hpp"
#include "mcflow/bdf.hpp"
#include "mcflow/geometry.hpp"
#include "mcflow/mesh.hpp"

#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace mcflow {

/// Ring of the last q snapshots, newest first: x[0] holds x^{n-1}, x[q-1]
/// holds x^{n-q}. Timestamps are equidistant with spacing tau.
struct History {
    int order = 0;
    double tau = 0.0;
    double newest_time = 0.0;
    std::deque<PositionVector> x;
    std::deque<StateVector> u;

    bool full() const { return static_cast<int>(x.size()) == order; }

    void push(PositionVector xn, StateVector un, double t) {
        x.push_front(std::move(xn));
        u.push_front(std::move(un));
        newest_time = t;
        if (static_cast<int>(x.size()) > order) {
            x.pop_back();
            u.pop_back();
        }
    }
};

struct StepOptions {
    bool idempotency_correction = false;
    double idempotency_tol = 1e-2;
    double solver_rel_tol = 1e-12;
};

struct StepOutcome {
    PositionVector x;
    StateVector u;
    NodalField v;
    double min_sqrt_g = 0.0;          // of the extrapolated geometry
    double max_solver_residual = 0.0; // relative, over all component solves
    std::uint64_t system_fingerprint = 0;
};

/// Extrapolated geometry and data for the next step,
/// sum_{j=0}^{q-1} gamma_j (x, u)^{n-1-j}.
std::pair<PositionVector, StateVector> extrapolate(const History& history,
                                                   const BDFScheme& scheme);

/// One linearly implicit BDF step: assemble on the extrapolated curve, solve
/// one SPD system per scalar component reusing a single factorization, then
/// update u, v = curvature block, and x.
StepOutcome step(const CurveMesh& mesh, const History& history, const BDFScheme& scheme,
                 const StepOptions& options = {});

/// Builds the q starting snapshots at times 0, tau, .., (q-1) tau. With a
/// material exact solution the snapshots are nodal interpolations of exact
/// values; otherwise backward-Euler substepping refines each macro interval
/// with enough substeps to keep the order-q accuracy of the starting values.
History startup(const CurveMesh& mesh, const PositionVector& x0, const StateVector& u0,
                const BDFScheme& scheme, double tau, const StepOptions& options = {},
                const ExactSolution* exact = nullptr);

/// Number of backward-Euler substeps per macro step used by startup.
int startup_substeps(double tau, int order);

enum class StopReason { completed, singularity, solver_failure };

struct FlowRecord {
    long step = 0;
    double t = 0.0;
    double length = 0.0;
    double min_sqrt_g = 0.0;
    std::optional<ErrorRecord> errors;
};

struct FlowResult {
    std::vector<FlowRecord> records;
    std::vector<std::pair<double, PositionVector>> snapshots;
    StopReason stop = StopReason::completed;
    std::string stop_message;
    long steps_completed = 0;
    double final_time = 0.0;
    PositionVector final_x;
    StateVector final_u;
};

struct RunOptions {
    StepOptions step;
    long record_stride = 1;
    long snapshot_stride = 0; // 0 disables snapshot capture
    const ExactSolution* exact = nullptr;
    /// Invoked serially at every recorded step with (step, t, x, u, v).
    std::function<void(long, double, const PositionVector&, const StateVector&,
                       const NodalField&)>
        observer;
};

/// Drives the flow from t = 0 until t >= T or a stop condition, recording
/// length, metric floor and (when a material exact solution is registered)
/// error norms at the configured stride.
FlowResult run_flow(const CurveMesh& mesh, const PositionVector& x0, const StateVector& u0,
                    const BDFScheme& scheme, double tau, double T,
                    const RunOptions& options = {});

} // namespace mcflow
