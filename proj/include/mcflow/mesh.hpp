#pragma once

#include "mcflow/curve.hpp"
#include "mcflow/refelem.hpp"

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace mcflow {

/// Nodal values of a d-component field, stored component-major: all N values
/// of component 0 first, then component 1, and so on. Scalar fields have
/// d = 1, vector fields d = n, matrix fields d = n*n.
struct NodalField {
    int components = 1;
    Eigen::VectorXd values;

    NodalField() = default;
    NodalField(int d, int n_nodes) : components(d), values(Eigen::VectorXd::Zero(d * n_nodes)) {}

    int node_count() const { return components > 0 ? static_cast<int>(values.size()) / components : 0; }

    double& at(int comp, int node) { return values[comp * node_count() + node]; }
    double at(int comp, int node) const { return values[comp * node_count() + node]; }

    Eigen::VectorBlock<Eigen::VectorXd> comp(int c) {
        const int N = node_count();
        return values.segment(c * N, N);
    }
    Eigen::VectorBlock<const Eigen::VectorXd> comp(int c) const {
        const int N = node_count();
        return values.segment(c * N, N);
    }
};

/// Position vectors are vector fields with one component per ambient axis.
using PositionVector = NodalField;

/// Nodal unknowns of the coupled flow: the tangent projection (an n x n
/// matrix per node, component-major) and the curvature vector (n components
/// per node). The velocity is identical to the curvature block.
struct StateVector {
    NodalField proj; // d = n*n
    NodalField curv; // d = n

    static StateVector zero(int ambient_dim, int n_nodes) {
        return {NodalField(ambient_dim * ambient_dim, n_nodes),
                NodalField(ambient_dim, n_nodes)};
    }
};

/// Flat index of matrix entry (alpha, beta) in an n x n matrix-valued field
/// (column-major, matching the component-major nodal vector layout).
inline int matrix_comp(int alpha, int beta, int n) { return alpha + beta * n; }

/// Periodic closed-curve mesh of E elements of degree k. Global nodes are
/// numbered so that element e covers nodes e*k .. e*k+k (mod N), N = E*k;
/// the shared endpoints close the curve. Immutable after construction.
struct CurveMesh {
    int ambient_dim = 0;
    int degree = 1;
    int n_elements = 0;
    ReferenceElement ref;

    /// Material parameter (label) of each global node, in [0, 2*pi).
    std::vector<double> node_params;

    int n_nodes() const { return n_elements * degree; }
    int nodes_per_element() const { return degree + 1; }
    int global_node(int element, int local) const {
        return (element * degree + local) % n_nodes();
    }
};

/// Metric factor and unit tangent at every quadrature point of every element.
struct MetricData {
    /// sqrt_g(e, q) = |sum_a x_a phi_a'(xi_q)|, the 1D surface measure.
    Eigen::ArrayXXd sqrt_g;
    /// tangent[e].col(q) is the unit tangent of element e at quad point q.
    std::vector<Eigen::MatrixXd> tangent;

    double min_sqrt_g() const { return sqrt_g.minCoeff(); }
};

/// Hard floor on the metric factor: below this the curve is treated as
/// collapsed and a DegenerateElementError is raised instead of letting NaNs
/// propagate.
inline constexpr double kDegeneracyFloor = 1e-12;

/// Orthonormal frame (u, w) spanning the standard circle plane:
/// X(theta) = R*(cos(theta) u + sin(theta) w). For n = 2 the rotation is an
/// in-plane phase; for n >= 3 the y-z-plane is tilted about the y-axis.
std::pair<Eigen::VectorXd, Eigen::VectorXd> circle_frame(int ambient_dim, double rotation);

/// Circle of the given radius with nodes exactly on the circle, equispaced in
/// arc length, in the plane of circle_frame(). Node 0 sits at parameter 0.
std::pair<CurveMesh, PositionVector>
build_circle_mesh(int n_elements, int degree, double radius, double plane_rotation, int ambient_dim);

/// Meshes an arbitrary closed parametrized curve with nodes placed at
/// approximately arc-length-equispaced parameters (numeric inversion of the
/// cumulative arc length, tolerance 1e-10).
std::pair<CurveMesh, PositionVector>
build_parametric_mesh(int n_elements, int degree, int ambient_dim, const ParametrizedCurve& curve);

/// Evaluates sqrt(g) and the unit tangent at all quadrature points. Throws
/// DegenerateElementError if any sqrt(g) falls below eps_degenerate.
MetricData metric_at_quad(const CurveMesh& mesh, const PositionVector& x,
                          double eps_degenerate = kDegeneracyFloor);

/// Total length of the discrete curve, sum_e int sqrt(g).
double discrete_length(const CurveMesh& mesh, const PositionVector& x);

/// Evaluates a nodal field at reference coordinate xi of one element.
Eigen::VectorXd eval_field(const CurveMesh& mesh, const NodalField& field, int element, double xi);

/// Writes position snapshots as CSV rows `t,node,comp0..comp{n-1}` with 17
/// significant digits.
void append_snapshot_csv(std::string& out, double t, const CurveMesh& mesh,
                         const PositionVector& x);
std::string snapshot_csv_header(int ambient_dim);

} // namespace mcflow
