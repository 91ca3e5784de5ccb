#include "mcflow/assembly.hpp"

#include "mcflow/errors.hpp"

#include <cmath>

namespace mcflow {

namespace test_hooks {
int projection_rhs_second_term_sign = +1;
} // namespace test_hooks

namespace {

void check_field(const CurveMesh& mesh, const NodalField& f, int expected_components,
                 const char* what) {
    if (f.components != expected_components || f.node_count() != mesh.n_nodes())
        throw AssemblyError(std::string(what) + ": field has " +
                            std::to_string(f.components) + " components / " +
                            std::to_string(f.node_count()) + " nodes, expected " +
                            std::to_string(expected_components) + " / " +
                            std::to_string(mesh.n_nodes()));
}

// Nodal values of `field` on element e as a (components x nodes_per_element)
// matrix, so columns against basis tables give quad-point values/derivatives.
Eigen::MatrixXd gather_element(const CurveMesh& mesh, const NodalField& field, int e) {
    Eigen::MatrixXd out(field.components, mesh.nodes_per_element());
    for (int a = 0; a < mesh.nodes_per_element(); ++a) {
        const int g = mesh.global_node(e, a);
        for (int c = 0; c < field.components; ++c)
            out(c, a) = field.at(c, g);
    }
    return out;
}

using Triplets = std::vector<Eigen::Triplet<double>>;

Eigen::SparseMatrix<double> from_triplets(int n, Triplets& trips) {
    Eigen::SparseMatrix<double> m(n, n);
    m.setFromTriplets(trips.begin(), trips.end());
    m.makeCompressed();
    return m;
}

} // namespace

SurfaceOperators assemble_operators(const CurveMesh& mesh, const PositionVector& x) {
    return assemble_operators(mesh, metric_at_quad(mesh, x));
}

SurfaceOperators assemble_operators(const CurveMesh& mesh, const MetricData& md) {
    const int N = mesh.n_nodes();
    const int nb = mesh.nodes_per_element();
    const int nq = mesh.ref.n_quad();
    const auto& phi = mesh.ref.basis_at_quad();
    const auto& dphi = mesh.ref.dbasis_at_quad();

    Triplets tm, ta;
    tm.reserve(static_cast<std::size_t>(mesh.n_elements) * nb * nb);
    ta.reserve(tm.capacity());

    for (int e = 0; e < mesh.n_elements; ++e) {
        for (int q = 0; q < nq; ++q) {
            const double w = mesh.ref.quad()[q].weight;
            const double sg = md.sqrt_g(e, q);
            for (int a = 0; a < nb; ++a) {
                const int ga = mesh.global_node(e, a);
                for (int b = 0; b < nb; ++b) {
                    const int gb = mesh.global_node(e, b);
                    tm.emplace_back(ga, gb, w * sg * phi(a, q) * phi(b, q));
                    ta.emplace_back(ga, gb, w / sg * dphi(a, q) * dphi(b, q));
                }
            }
        }
    }
    return {from_triplets(N, tm), from_triplets(N, ta)};
}

Eigen::SparseMatrix<double> assemble_mass(const CurveMesh& mesh, const PositionVector& x) {
    return assemble_operators(mesh, x).mass;
}

Eigen::SparseMatrix<double> assemble_stiffness(const CurveMesh& mesh, const PositionVector& x) {
    return assemble_operators(mesh, x).stiffness;
}

NodalField assemble_projection_rhs(const CurveMesh& mesh, const PositionVector& x,
                                   const NodalField& proj) {
    return assemble_projection_rhs(mesh, metric_at_quad(mesh, x), proj);
}

NodalField assemble_projection_rhs(const CurveMesh& mesh, const MetricData& md,
                                   const NodalField& proj) {
    const int n = mesh.ambient_dim;
    check_field(mesh, proj, n * n, "projection rhs");
    const int nb = mesh.nodes_per_element();
    const int nq = mesh.ref.n_quad();
    const auto& phi = mesh.ref.basis_at_quad();
    const auto& dphi = mesh.ref.dbasis_at_quad();
    const double second_sign = static_cast<double>(test_hooks::projection_rhs_second_term_sign);

    NodalField out(n * n, mesh.n_nodes());
    for (int e = 0; e < mesh.n_elements; ++e) {
        const Eigen::MatrixXd pe = gather_element(mesh, proj, e);
        for (int q = 0; q < nq; ++q) {
            const double w = mesh.ref.quad()[q].weight;
            const double sg = md.sqrt_g(e, q);
            const double gi = 1.0 / (sg * sg);
            const Eigen::VectorXd pvec = pe * phi.col(q);
            const Eigen::VectorXd dvec = pe * dphi.col(q);
            const Eigen::Map<const Eigen::MatrixXd> P(pvec.data(), n, n);
            const Eigen::Map<const Eigen::MatrixXd> D(dvec.data(), n, n);

            const Eigen::MatrixXd F =
                gi * (2.0 * D * D.transpose() -
                      second_sign * 4.0 * D * P * D.transpose());

            for (int a = 0; a < nb; ++a) {
                const int g = mesh.global_node(e, a);
                const double scale = w * sg * phi(a, q);
                for (int beta = 0; beta < n; ++beta)
                    for (int alpha = 0; alpha < n; ++alpha)
                        out.at(matrix_comp(alpha, beta, n), g) += scale * F(alpha, beta);
            }
        }
    }
    return out;
}

NodalField assemble_curvature_rhs(const CurveMesh& mesh, const PositionVector& x,
                                  const NodalField& proj, const NodalField& curv) {
    return assemble_curvature_rhs(mesh, metric_at_quad(mesh, x), proj, curv);
}

NodalField assemble_curvature_rhs(const CurveMesh& mesh, const MetricData& md,
                                  const NodalField& proj, const NodalField& curv) {
    const int n = mesh.ambient_dim;
    check_field(mesh, proj, n * n, "curvature rhs");
    check_field(mesh, curv, n, "curvature rhs");
    const int nb = mesh.nodes_per_element();
    const int nq = mesh.ref.n_quad();
    const auto& phi = mesh.ref.basis_at_quad();
    const auto& dphi = mesh.ref.dbasis_at_quad();

    NodalField out(n, mesh.n_nodes());
    for (int e = 0; e < mesh.n_elements; ++e) {
        const Eigen::MatrixXd pe = gather_element(mesh, proj, e);
        const Eigen::MatrixXd he = gather_element(mesh, curv, e);
        for (int q = 0; q < nq; ++q) {
            const double w = mesh.ref.quad()[q].weight;
            const double sg = md.sqrt_g(e, q);
            const double gi = 1.0 / (sg * sg);
            const Eigen::VectorXd dpvec = pe * dphi.col(q);
            const Eigen::Map<const Eigen::MatrixXd> D(dpvec.data(), n, n);
            const Eigen::VectorXd hval = he * phi.col(q);
            const Eigen::VectorXd dh = he * dphi.col(q);

            const Eigen::VectorXd F = gi * (2.0 * D * dh + 4.0 * D * (D * hval));

            for (int a = 0; a < nb; ++a) {
                const int g = mesh.global_node(e, a);
                const double scale = w * sg * phi(a, q);
                for (int alpha = 0; alpha < n; ++alpha)
                    out.at(alpha, g) += scale * F[alpha];
            }
        }
    }
    return out;
}

NodalField apply_blocked(const Eigen::SparseMatrix<double>& scalar_op,
                         const NodalField& field) {
    const int N = field.node_count();
    if (scalar_op.rows() != N || scalar_op.cols() != N)
        throw AssemblyError("apply_blocked: matrix is " + std::to_string(scalar_op.rows()) +
                            "x" + std::to_string(scalar_op.cols()) + ", field has " +
                            std::to_string(N) + " nodes");
    NodalField out(field.components, N);
    for (int c = 0; c < field.components; ++c)
        out.comp(c) = scalar_op * field.comp(c);
    return out;
}

std::uint64_t fingerprint(const Eigen::SparseMatrix<double>& m) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](const void* data, std::size_t bytes) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < bytes; ++i) {
            h ^= p[i];
            h *= 1099511628211ull;
        }
    };
    const std::int64_t rows = m.rows(), nnz = m.nonZeros();
    mix(&rows, sizeof rows);
    mix(&nnz, sizeof nnz);
    mix(m.valuePtr(), sizeof(double) * m.nonZeros());
    mix(m.innerIndexPtr(), sizeof(int) * m.nonZeros());
    mix(m.outerIndexPtr(), sizeof(int) * (m.outerSize() + 1));
    return h;
}

std::vector<std::vector<Eigen::MatrixXd>>
ambient_gradient_at_quad(const CurveMesh& mesh, const PositionVector& x,
                         const NodalField& field) {
    const int n = mesh.ambient_dim;
    const MetricData md = metric_at_quad(mesh, x);
    const int nq = mesh.ref.n_quad();
    const auto& dphi = mesh.ref.dbasis_at_quad();

    std::vector<std::vector<Eigen::MatrixXd>> out(mesh.n_elements);
    for (int e = 0; e < mesh.n_elements; ++e) {
        const Eigen::MatrixXd fe = gather_element(mesh, field, e);
        const Eigen::MatrixXd xe = gather_element(mesh, x, e);
        out[e].reserve(nq);
        for (int q = 0; q < nq; ++q) {
            const Eigen::VectorXd df = fe * dphi.col(q);
            const Eigen::VectorXd dx = xe * dphi.col(q);
            const double gi = 1.0 / dx.squaredNorm();
            Eigen::MatrixXd grad(n, field.components);
            for (int c = 0; c < field.components; ++c)
                grad.col(c) = gi * df[c] * dx;
            out[e].push_back(std::move(grad));
        }
    }
    return out;
}

} // namespace mcflow
