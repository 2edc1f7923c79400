#include "chstrip/mesh.hpp"

#include <stdexcept>
#include <vector>

#include "chstrip/errors.hpp"

namespace chstrip::mesh {

FunctionPair constant_pair(const StripMesh& mesh, double c) {
    FunctionPair p;
    p.values = Eigen::VectorXd::Constant(mesh.dofs(), c);
    return p;
}

StripMesh build_strip_mesh(int nx, int ny, double lx, double ly) {
    if (nx < 4) throw std::invalid_argument("build_strip_mesh: nx must be >= 4");
    if (ny < 3) throw std::invalid_argument("build_strip_mesh: ny must be >= 3");
    if (!(lx > 0.0) || !(ly > 0.0))
        throw std::invalid_argument("build_strip_mesh: lx and ly must be positive");

    StripMesh m;
    m.nx = nx;
    m.ny = ny;
    m.lx = lx;
    m.ly = ly;
    m.hx = lx / nx;
    m.hy = ly / (ny - 1);

    m.bulk_weights.resize(m.dofs());
    m.boundary_weights = Eigen::VectorXd::Zero(m.dofs());
    for (int j = 0; j < ny; ++j) {
        const double wy = m.boundary_row(j) ? 0.5 * m.hy : m.hy;
        for (int i = 0; i < nx; ++i) {
            m.bulk_weights[m.index(i, j)] = m.hx * wy;
            if (m.boundary_row(j)) m.boundary_weights[m.index(i, j)] = m.hx;
        }
    }
    return m;
}

namespace {

using Trip = Eigen::Triplet<double>;

// Accumulate the edge contribution  c * (w_a - w_b)(v_a - v_b)  into K.
void add_edge(std::vector<Trip>& trips, int a, int b, double c) {
    trips.emplace_back(a, a, c);
    trips.emplace_back(b, b, c);
    trips.emplace_back(a, b, -c);
    trips.emplace_back(b, a, -c);
}

}  // namespace

DiscreteOperators assemble_operators(const StripMesh& mesh) {
    DiscreteOperators ops;
    ops.mesh = mesh;
    ops.mass = mesh.bulk_weights + mesh.boundary_weights;

    const int n = mesh.dofs();
    std::vector<Trip> trips;
    trips.reserve(static_cast<size_t>(8 * n));

    // Bulk x-edges: int (d_x w)(d_x v) ~ sum_rows wy * sum_i (dw)(dv)/hx.
    for (int j = 0; j < mesh.ny; ++j) {
        const double wy = mesh.boundary_row(j) ? 0.5 * mesh.hy : mesh.hy;
        const double c = wy / mesh.hx;
        for (int i = 0; i < mesh.nx; ++i)
            add_edge(trips, mesh.index(i, j), mesh.index((i + 1) % mesh.nx, j), c);
    }
    // Bulk y-edges: int (d_y w)(d_y v) ~ sum_i hx * sum_j (dw)(dv)/hy.
    {
        const double c = mesh.hx / mesh.hy;
        for (int j = 0; j + 1 < mesh.ny; ++j)
            for (int i = 0; i < mesh.nx; ++i)
                add_edge(trips, mesh.index(i, j), mesh.index(i, j + 1), c);
    }
    // Tangential boundary edges (Laplace-Beltrami along each circle).
    for (int j : {0, mesh.ny - 1}) {
        const double c = 1.0 / mesh.hx;
        for (int i = 0; i < mesh.nx; ++i)
            add_edge(trips, mesh.index(i, j), mesh.index((i + 1) % mesh.nx, j), c);
    }

    ops.stiffness.resize(n, n);
    ops.stiffness.setFromTriplets(trips.begin(), trips.end());
    ops.stiffness.makeCompressed();

    // Discrete gradients, used by advection quadrature and diagnostics.
    std::vector<Trip> gx, gy;
    gx.reserve(static_cast<size_t>(2 * n));
    gy.reserve(static_cast<size_t>(3 * n));
    for (int j = 0; j < mesh.ny; ++j) {
        for (int i = 0; i < mesh.nx; ++i) {
            const int row = mesh.index(i, j);
            const int ip = mesh.index((i + 1) % mesh.nx, j);
            const int im = mesh.index((i + mesh.nx - 1) % mesh.nx, j);
            gx.emplace_back(row, ip, 0.5 / mesh.hx);
            gx.emplace_back(row, im, -0.5 / mesh.hx);
            if (j == 0) {
                gy.emplace_back(row, mesh.index(i, 0), -1.5 / mesh.hy);
                gy.emplace_back(row, mesh.index(i, 1), 2.0 / mesh.hy);
                gy.emplace_back(row, mesh.index(i, 2), -0.5 / mesh.hy);
            } else if (j == mesh.ny - 1) {
                gy.emplace_back(row, mesh.index(i, j), 1.5 / mesh.hy);
                gy.emplace_back(row, mesh.index(i, j - 1), -2.0 / mesh.hy);
                gy.emplace_back(row, mesh.index(i, j - 2), 0.5 / mesh.hy);
            } else {
                gy.emplace_back(row, mesh.index(i, j + 1), 0.5 / mesh.hy);
                gy.emplace_back(row, mesh.index(i, j - 1), -0.5 / mesh.hy);
            }
        }
    }
    ops.grad_x.resize(n, n);
    ops.grad_x.setFromTriplets(gx.begin(), gx.end());
    ops.grad_x.makeCompressed();
    ops.grad_y.resize(n, n);
    ops.grad_y.setFromTriplets(gy.begin(), gy.end());
    ops.grad_y.makeCompressed();
    return ops;
}

double generalized_mean(const FunctionPair& p, const StripMesh& mesh) {
    const double num = mesh.bulk_weights.dot(p.values) + mesh.boundary_weights.dot(p.values);
    return num / mesh.total_measure();
}

double inner_h(const FunctionPair& p, const FunctionPair& q, const StripMesh& mesh) {
    if (p.values.size() != q.values.size() || p.values.size() != mesh.dofs())
        throw std::invalid_argument("inner_h: dimension mismatch");
    return p.values.cwiseProduct(mesh.bulk_weights + mesh.boundary_weights).dot(q.values);
}

double inner_a(const FunctionPair& p, const FunctionPair& q, const DiscreteOperators& ops) {
    if (p.values.size() != q.values.size() || p.values.size() != ops.mesh.dofs())
        throw std::invalid_argument("inner_a: dimension mismatch");
    return p.values.dot(ops.stiffness * q.values);
}

}  // namespace chstrip::mesh
