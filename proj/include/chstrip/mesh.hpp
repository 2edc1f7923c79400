#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace chstrip::mesh {

/// Uniform grid on the strip (0,lx) x (0,ly), periodic in x.
/// The rows j = 0 and j = ny-1 are the two boundary circles; their nodes
/// carry both a bulk quadrature weight (trapezoid in y) and a boundary
/// quadrature weight (uniform in x).
struct StripMesh {
    int nx = 0;   // nodes in x (periodic, no duplicated seam)
    int ny = 0;   // nodes in y, boundary rows included
    double lx = 0.0;
    double ly = 0.0;
    double hx = 0.0;  // lx / nx
    double hy = 0.0;  // ly / (ny - 1)

    Eigen::VectorXd bulk_weights;      // length nx*ny, integrates over Omega
    Eigen::VectorXd boundary_weights;  // length nx*ny, nonzero on boundary rows only

    int dofs() const { return nx * ny; }
    int index(int i, int j) const { return j * nx + i; }
    bool boundary_row(int j) const { return j == 0 || j == ny - 1; }
    double x(int i) const { return hx * i; }
    double y(int j) const { return hy * j; }
    /// |Omega| + |Gamma|
    double total_measure() const { return lx * ly + 2.0 * lx; }
};

/// A bulk field together with its boundary trace. The trace is not stored
/// separately: reading the pair on a boundary row IS reading the trace, so
/// the defining identity of the coupled space holds structurally.
struct FunctionPair {
    Eigen::VectorXd values;  // length nx*ny
};

FunctionPair constant_pair(const StripMesh& mesh, double c);

/// Evaluate f(x, y) at every node.
template <typename F>
FunctionPair sample_pair(const StripMesh& mesh, F&& f) {
    FunctionPair p;
    p.values.resize(mesh.dofs());
    for (int j = 0; j < mesh.ny; ++j)
        for (int i = 0; i < mesh.nx; ++i)
            p.values[mesh.index(i, j)] = f(mesh.x(i), mesh.y(j));
    return p;
}

/// Mass (diagonal), stiffness, and gradient operators of the coupled
/// bulk/surface form. The stiffness realizes
///   a(w, v) = int_Omega grad w . grad v + int_Gamma grad_G w . grad_G v
/// with centered second differences, periodic in x, natural in y; the
/// boundary rows carry the tangential (Laplace-Beltrami) part.
struct DiscreteOperators {
    StripMesh mesh;
    Eigen::VectorXd mass;                   // diagonal of M (bulk + boundary weights)
    Eigen::SparseMatrix<double> stiffness;  // K, symmetric PSD, constants in kernel
    Eigen::SparseMatrix<double> grad_x;     // centered, periodic
    Eigen::SparseMatrix<double> grad_y;     // centered inside, one-sided 2nd order on rows 0, ny-1
};

StripMesh build_strip_mesh(int nx, int ny, double lx, double ly);
DiscreteOperators assemble_operators(const StripMesh& mesh);

/// (int_Omega v + int_Gamma v_G) / (|Omega| + |Gamma|)
double generalized_mean(const FunctionPair& p, const StripMesh& mesh);

/// calH pairing  int_Omega p q + int_Gamma p_G q_G  = p^T M q.
double inner_h(const FunctionPair& p, const FunctionPair& q, const StripMesh& mesh);

/// Stiffness form  a(p, q) = p^T K q.
double inner_a(const FunctionPair& p, const FunctionPair& q, const DiscreteOperators& ops);

}  // namespace chstrip::mesh
