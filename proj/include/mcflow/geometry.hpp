#pragma once

#include "mcflow/curve.hpp"
#include "mcflow/mesh.hpp"

#include <Eigen/Dense>
#include <functional>
#include <string>

namespace mcflow {

// ---------------------------------------------------------------------------
// Test-curve library. All curves are 2*pi-periodic immersions with analytic
// first and second derivatives.
// ---------------------------------------------------------------------------

/// Circle of given radius in the plane of circle_frame(ambient_dim, rotation).
ParametrizedCurve circle_curve(double radius, double rotation, int ambient_dim);

/// (a cos, b sin, 0, ...) in R^n.
ParametrizedCurve ellipse_curve(double a, double b, int ambient_dim);

/// ((2+cos 3t) cos 2t, (2+cos 3t) sin 2t, sin 3t) * scale in R^3.
ParametrizedCurve trefoil_curve(double scale);

/// (cos t, sin t, amplitude sin(frequency t)) in R^3.
ParametrizedCurve sinusoid_curve(double amplitude, int frequency);

/// Angenent oval (planar ancient solution of curve shortening flow) at
/// absolute time t < 0, parametrized by tangent angle, embedded in R^3 with
/// third component 0. Positions come from adaptive quadrature of
/// (cos, sin)/kappa to 1e-10.
ParametrizedCurve angenent_curve(double t);

/// Closed-form Angenent-oval curvature kappa(phi, t) for absolute time t < 0:
/// kappa^2 = (e^{-2t}-1)^{-1} + cos^2(phi).
double angenent_curvature(double phi, double t);

// ---------------------------------------------------------------------------
// Exact flows.
// ---------------------------------------------------------------------------

/// A flow with closed-form description: time-dependent maps for position,
/// projection, curvature and velocity. `material` marks whether theta labels
/// material points (so nodal errors against the flow are meaningful); only
/// then may startup interpolate exact values.
struct ExactSolution {
    std::string name;
    int ambient_dim = 0;
    double horizon = 0.0; // solution valid on [0, horizon)
    bool material = false;

    std::function<Eigen::VectorXd(double, double)> position;   // (theta, t)
    std::function<Eigen::MatrixXd(double, double)> projection; // n x n
    std::function<Eigen::VectorXd(double, double)> curvature;
    std::function<Eigen::VectorXd(double, double)> velocity;
};

/// Shrinking circle R(t) = sqrt(R0^2 - 2t), valid until R0^2/2. Material
/// points move radially, so theta is a material label.
ExactSolution circle_exact(double radius0, double rotation, int ambient_dim);

/// Angenent oval started at absolute time t0 < 0; a solution of the flow
/// exists on [0, -t0). The tangent-angle parametrization does not track
/// material points (material = false).
ExactSolution angenent_oval(double t0);

// ---------------------------------------------------------------------------
// Initial data.
// ---------------------------------------------------------------------------

/// Exact projection t (x) t and curvature vector X''/|X'|^2 - (X'.X''/|X'|^4) X'
/// of a parametrized curve at a single parameter.
Eigen::MatrixXd curve_projection(const ParametrizedCurve& curve, double theta);
Eigen::VectorXd curve_curvature(const ParametrizedCurve& curve, double theta);

/// Nodal interpolation of positions and exact (projection, curvature) at the
/// mesh's material parameters.
std::pair<PositionVector, StateVector> initial_data(const ParametrizedCurve& curve,
                                                    const CurveMesh& mesh);

} // namespace mcflow
