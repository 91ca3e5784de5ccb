#pragma once

#include "mcflow/mesh.hpp"

#include <Eigen/Sparse>
#include <cstdint>
#include <vector>

namespace mcflow {

/// Scalar Galerkin matrices on the current discrete curve. Vector- and
/// matrix-valued fields reuse them blockwise (Kronecker structure), so one
/// factorization serves every solution component.
struct SurfaceOperators {
    Eigen::SparseMatrix<double> mass;      // M(x)_ij = int phi_i phi_j
    Eigen::SparseMatrix<double> stiffness; // A(x)_ij = int grad phi_i . grad phi_j
};

Eigen::SparseMatrix<double> assemble_mass(const CurveMesh& mesh, const PositionVector& x);
Eigen::SparseMatrix<double> assemble_stiffness(const CurveMesh& mesh, const PositionVector& x);

/// Assembles mass and stiffness in one metric pass.
SurfaceOperators assemble_operators(const CurveMesh& mesh, const PositionVector& x);
SurfaceOperators assemble_operators(const CurveMesh& mesh, const MetricData& metric);

/// Galerkin vector of the projection-equation nonlinearity tested against the
/// scalar basis: entry (alpha,beta,i) carries
///   int [ 2 sum_mu grad p_am . grad p_bm
///         - 4 sum_mu,kap p_mk grad p_am . grad p_bk ] phi_i.
NodalField assemble_projection_rhs(const CurveMesh& mesh, const PositionVector& x,
                                   const NodalField& proj);
NodalField assemble_projection_rhs(const CurveMesh& mesh, const MetricData& metric,
                                   const NodalField& proj);

/// Galerkin vector of the curvature-equation nonlinearity: entry (alpha,i)
/// carries int [ 2 sum_mu grad p_am . grad H_m
///               + 4 sum_mu,kap grad p_am . grad p_mk H_k ] phi_i.
NodalField assemble_curvature_rhs(const CurveMesh& mesh, const PositionVector& x,
                                  const NodalField& proj, const NodalField& curv);
NodalField assemble_curvature_rhs(const CurveMesh& mesh, const MetricData& metric,
                                  const NodalField& proj, const NodalField& curv);

/// Applies the scalar matrix to each component block of `field` independently
/// (the I_d (x) M structure).
NodalField apply_blocked(const Eigen::SparseMatrix<double>& scalar_op, const NodalField& field);

/// FNV-1a hash of a sparse matrix's structure and values. Lets tests assert
/// that all component solves of a step share the identical matrix.
std::uint64_t fingerprint(const Eigen::SparseMatrix<double>& m);

/// Ambient tangential gradients at the quadrature points: result[e][q] is an
/// n x d matrix whose column c is g^{-1} (d_xi field_c) (d_xi X). Cross-check
/// utility for the intrinsic 1/g dot products used by the assembly.
std::vector<std::vector<Eigen::MatrixXd>>
ambient_gradient_at_quad(const CurveMesh& mesh, const PositionVector& x,
                         const NodalField& field);

namespace test_hooks {
/// Sign applied to the second (projection-weighted) term of the
/// projection-equation nonlinearity. +1 in production; tests flip it to -1 to
/// confirm the verification suites catch a broken assembly.
extern int projection_rhs_second_term_sign;
} // namespace test_hooks

} // namespace mcflow
