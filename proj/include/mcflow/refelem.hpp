#pragma once

#include <Eigen/Dense>
#include <vector>

namespace mcflow {

/// One Gauss point on the reference interval [0,1].
struct QuadPoint {
    double xi;
    double weight;
};

/// Gauss--Legendre rule with n points on [0,1], exact for polynomials of
/// degree <= 2n-1. Weights sum to 1.
std::vector<QuadPoint> gauss_legendre(int n_points);

/// Reference-interval Lagrange element of degree k: equispaced nodes on
/// [0,1] (endpoints included) and shape-function tables at the quadrature
/// points. Immutable after construction; the single source of basis values
/// for all assembly.
class ReferenceElement {
public:
    ReferenceElement() = default; // empty shell; build_reference_element fills it

    int degree() const { return degree_; }
    int n_basis() const { return degree_ + 1; }
    int n_quad() const { return static_cast<int>(quad_.size()); }

    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<QuadPoint>& quad() const { return quad_; }

    /// basis_at_quad()(a, q) = phi_a(xi_q)
    const Eigen::MatrixXd& basis_at_quad() const { return basis_at_quad_; }
    /// dbasis_at_quad()(a, q) = phi_a'(xi_q)
    const Eigen::MatrixXd& dbasis_at_quad() const { return dbasis_at_quad_; }

    /// Shape functions at an arbitrary reference coordinate.
    Eigen::VectorXd eval_basis(double xi) const;
    Eigen::VectorXd eval_dbasis(double xi) const;

    friend ReferenceElement build_reference_element(int degree, int n_quad);

private:
    int degree_ = 0;
    std::vector<double> nodes_;
    std::vector<QuadPoint> quad_;
    Eigen::MatrixXd basis_at_quad_;
    Eigen::MatrixXd dbasis_at_quad_;
};

/// Builds the degree-k reference element with an n_quad-point Gauss rule.
/// Requires 1 <= k <= 4 and n_quad >= k+1.
ReferenceElement build_reference_element(int degree, int n_quad);

/// Default rule: k+2 Gauss points, enough to keep the quadrature error of
/// curved-element integrands below the discretization error.
ReferenceElement build_reference_element(int degree);

} // namespace mcflow
