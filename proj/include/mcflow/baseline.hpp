#pragma once

#include "mcflow/stepper.hpp"

#include <deque>

namespace mcflow {

/// History ring for the position-only curve-shortening baseline, newest first.
struct DziukHistory {
    int order = 0;
    double tau = 0.0;
    double newest_time = 0.0;
    std::deque<PositionVector> x;

    bool full() const { return static_cast<int>(x.size()) == order; }

    void push(PositionVector xn, double t) {
        x.push_front(std::move(xn));
        newest_time = t;
        if (static_cast<int>(x.size()) > order)
            x.pop_back();
    }
};

struct DziukOutcome {
    PositionVector x;
    NodalField v; // discrete time derivative of the positions
    double min_sqrt_g = 0.0;
};

/// One linearly implicit BDF step of the curve-shortening baseline:
/// (delta_0 M(x~) + tau A(x~)) x^n = -M(x~) sum_{j>=1} delta_j x^{n-j},
/// solved per ambient component on the extrapolated geometry.
DziukOutcome dziuk_step(const CurveMesh& mesh, const DziukHistory& history,
                        const BDFScheme& scheme, const StepOptions& options = {});

/// Starting positions mirroring the coupled method's policy: interpolated
/// exact values when a material exact solution is registered, otherwise
/// backward-Euler substepping.
DziukHistory dziuk_startup(const CurveMesh& mesh, const PositionVector& x0,
                           const BDFScheme& scheme, double tau,
                           const StepOptions& options = {},
                           const ExactSolution* exact = nullptr);

/// Drives the baseline to final time. Error records carry position and
/// velocity norms only; the projection/curvature entries are NaN (the
/// baseline has no such unknowns).
FlowResult run_dziuk(const CurveMesh& mesh, const PositionVector& x0,
                     const BDFScheme& scheme, double tau, double T,
                     const RunOptions& options = {});

struct ComparePair {
    FlowResult coupled;
    FlowResult dziuk;
};

/// Runs the coupled method and the baseline from the identical initial mesh.
ComparePair compare_runs(const CurveMesh& mesh, const PositionVector& x0,
                         const StateVector& u0, const BDFScheme& scheme, double tau,
                         double T, const RunOptions& options = {});

} // namespace mcflow
