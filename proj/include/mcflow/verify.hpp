#pragma once

#include "mcflow/geometry.hpp"

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace mcflow {

namespace oracle {

/// Dense finite-difference evaluations on the exact flow maps. These never
/// touch the assembly path: positions, projections and curvatures are
/// differentiated directly (central differences, step 1e-5; the Laplacian
/// nests a 1e-4 outer step to keep roundoff below the 1e-5 residual budget).
/// They require a material parametrization.

/// Nonlinearity of the projection evolution equation at (theta, t).
Eigen::MatrixXd fd_projection_nonlinearity(const ExactSolution& exact, double theta, double t);

/// Nonlinearity of the curvature evolution equation at (theta, t).
Eigen::VectorXd fd_curvature_nonlinearity(const ExactSolution& exact, double theta, double t);

/// Residual of the projection evolution equation (material derivative minus
/// Laplace-Beltrami minus nonlinearity), Frobenius norm.
double fd_projection_equation_residual(const ExactSolution& exact, double theta, double t);

/// Residual of the curvature evolution equation, Euclidean norm.
double fd_curvature_equation_residual(const ExactSolution& exact, double theta, double t);

} // namespace oracle

struct VerifyGroup {
    std::string name;
    bool pass = false;
    double measured = 0.0;  // worst observed residual / defect
    double threshold = 0.0; // what it was compared against
    std::string detail;
};

struct VerifyReport {
    std::vector<VerifyGroup> groups;
    bool all_pass() const {
        for (const auto& g : groups)
            if (!g.pass)
                return false;
        return true;
    }
};

struct VerifyOptions {
    /// Test hook: flip the sign of the projection nonlinearity's second term
    /// during the assembly-facing checks to confirm the suite catches it.
    bool flip_projection_rhs_sign = false;
};

/// Runs all oracle suites: BDF coefficient identities, quadrature exactness,
/// partition of unity, operator structure (SPD mass, stiffness kernel,
/// Laplace-Beltrami spectrum, metric scaling), pointwise evolution-equation
/// residuals and semi-discrete assembly defects on the exact circle.
VerifyReport run_verification(const VerifyOptions& options = {});

std::string format_report(const VerifyReport& report);

} // namespace mcflow
