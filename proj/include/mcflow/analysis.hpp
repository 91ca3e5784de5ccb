#pragma once

#include "mcflow/assembly.hpp"
#include "mcflow/geometry.hpp"
#include "mcflow/mesh.hpp"

#include <Eigen/Dense>
#include <vector>

namespace mcflow {

struct Norms {
    double l2 = 0.0;
    double h1 = 0.0;
};

/// Discrete norms of a nodal error field on the current discrete curve:
/// ||e||_L2^2 = sum_c e_c' M e_c and ||e||_H1^2 adds the stiffness quadratic
/// form, so H1 >= L2 always.
Norms discrete_norms(const SurfaceOperators& ops, const NodalField& error_field);
Norms discrete_norms(const CurveMesh& mesh, const PositionVector& x,
                     const NodalField& error_field);

/// Errors of one snapshot against an exact flow, measured at the material
/// parameters assigned at mesh construction, in the norms of the current
/// discrete curve.
struct ErrorRecord {
    double t = 0.0;
    Norms x, v, proj, curv;
    double length = 0.0;
    double min_sqrt_g = 0.0;
};

ErrorRecord error_vs_exact(const CurveMesh& mesh, const PositionVector& x,
                           const StateVector& u, const NodalField& v,
                           const ExactSolution& exact, double t);

/// Experimental orders of convergence between consecutive refinement levels:
/// order_i = log(e_i / e_{i+1}) / log(p_i / p_{i+1}).
struct EOCTable {
    std::vector<double> parameter;
    std::vector<double> error;
    /// orders[i] relates levels i and i+1; NaN where an error vanished.
    std::vector<double> order;
};

EOCTable eoc(const std::vector<std::pair<double, double>>& levels);

/// Per-node defects of a projection-matrix field: maxima over nodes of
/// ||P - P'||_F, ||P^2 - P||_F and |tr P - 1|.
struct PiDiagnostics {
    double max_asymmetry = 0.0;
    double max_idempotency_defect = 0.0;
    double max_trace_defect = 0.0;
};

PiDiagnostics pi_diagnostics(const NodalField& proj, int ambient_dim);

/// Replaces a near-projection matrix by the nearest symmetric idempotent
/// rank-1 projection (spectral snap). Inputs already idempotent to `tol` pass
/// through unchanged; applying the map twice equals applying it once.
Eigen::MatrixXd idempotency_correct(const Eigen::MatrixXd& proj_matrix, double tol);

/// Frobenius norm of P^2 - P.
double idempotency_defect(const Eigen::MatrixXd& m);

} // namespace mcflow
