#include "chstrip/spectral.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <vector>

#include "chstrip/errors.hpp"

namespace chstrip::spectral {

EigenBasis eigendecompose(const mesh::DiscreteOperators& ops, int n_modes) {
    const Eigen::Index n = ops.mass.size();
    if (n_modes < 1 || n_modes > n)
        throw ConfigError("n_modes must lie in [1, dofs]");

    // Similarity transform M^{-1/2} K M^{-1/2} keeps the problem symmetric.
    const Eigen::VectorXd isqrt = ops.mass.cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd s = Eigen::MatrixXd(ops.stiffness);
    s = isqrt.asDiagonal() * s * isqrt.asDiagonal();
    s = 0.5 * (s + s.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
    if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");

    EigenBasis basis;
    basis.eigenvalues = es.eigenvalues().head(n_modes);
    basis.modes = isqrt.asDiagonal() * es.eigenvectors().leftCols(n_modes);
    basis.mass = ops.mass;
    basis.total_measure = ops.mesh.total_measure();

    // The kernel is exactly the constants; snap mode 1 to it.
    basis.eigenvalues(0) = 0.0;
    basis.modes.col(0).setConstant(1.0 / std::sqrt(ops.mass.sum()));

    // Fix each sign deterministically: largest-magnitude entry positive.
    for (int j = 1; j < n_modes; ++j) {
        Eigen::Index imax = 0;
        basis.modes.col(j).cwiseAbs().maxCoeff(&imax);
        if (basis.modes(imax, j) < 0.0) basis.modes.col(j) *= -1.0;
    }
    return basis;
}

Eigen::VectorXd project(const EigenBasis& basis, const Eigen::VectorXd& values) {
    if (values.size() != basis.dofs())
        throw std::invalid_argument("project: dimension mismatch");
    return basis.modes.transpose() * basis.mass.cwiseProduct(values);
}

Eigen::VectorXd reconstruct(const EigenBasis& basis, const Eigen::VectorXd& coeffs) {
    if (coeffs.size() != basis.n_modes())
        throw std::invalid_argument("reconstruct: dimension mismatch");
    return basis.modes * coeffs;
}

Eigen::VectorXd apply_n_operator(const EigenBasis& basis, const Eigen::VectorXd& values) {
    Eigen::VectorXd c = project(basis, values);
    const double scale = 1.0 + c.norm();
    if (std::abs(c(0)) > 1e-8 * scale)
        throw PreconditionError("N operator requires zero generalized mean");
    c(0) = 0.0;
    for (int j = 1; j < c.size(); ++j) c(j) /= basis.eigenvalues(j);
    return reconstruct(basis, c);
}

double star_norm(const EigenBasis& basis, const Eigen::VectorXd& coeffs) {
    if (coeffs.size() != basis.n_modes())
        throw std::invalid_argument("star_norm: dimension mismatch");
    const double scale = 1.0 + coeffs.norm();
    if (std::abs(coeffs(0)) > 1e-8 * scale)
        throw PreconditionError("star norm requires zero generalized mean");
    double acc = 0.0;
    for (int j = 1; j < coeffs.size(); ++j)
        acc += coeffs(j) * coeffs(j) / basis.eigenvalues(j);
    return std::sqrt(acc);
}

namespace {

Eigen::VectorXd weighted_data(const mesh::DiscreteOperators& ops,
                              const Eigen::VectorXd& bulk_data,
                              const Eigen::VectorXd& boundary_data) {
    const mesh::StripMesh& mesh = ops.mesh;
    if (bulk_data.size() != mesh.dofs())
        throw std::invalid_argument("solve_elliptic: bulk datum has wrong size");
    if (boundary_data.size() != 2 * mesh.nx)
        throw std::invalid_argument("solve_elliptic: boundary datum has wrong size");
    Eigen::VectorXd rhs = mesh.bulk_weights.cwiseProduct(bulk_data);
    for (int i = 0; i < mesh.nx; ++i) {
        rhs[mesh.index(i, 0)] += mesh.hx * boundary_data[i];
        rhs[mesh.index(i, mesh.ny - 1)] += mesh.hx * boundary_data[mesh.nx + i];
    }
    return rhs;
}

}  // namespace

Eigen::VectorXd solve_elliptic(const mesh::DiscreteOperators& ops,
                               const Eigen::VectorXd& bulk_data,
                               const Eigen::VectorXd& boundary_data,
                               const std::optional<EllipticGamma>& gamma) {
    const Eigen::Index n = ops.mass.size();
    const Eigen::VectorXd rhs = weighted_data(ops, bulk_data, boundary_data);

    if (!gamma) {
        // Pure Laplace problem: solvable only against zero-mean data, solution
        // pinned by the same constraint through a bordered system.
        if (std::abs(rhs.sum()) > 1e-10 * (1.0 + rhs.cwiseAbs().sum()))
            throw PreconditionError("elliptic datum must have zero generalized mean");
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(static_cast<size_t>(ops.stiffness.nonZeros()) + 2 * n);
        for (int k = 0; k < ops.stiffness.outerSize(); ++k)
            for (Eigen::SparseMatrix<double>::InnerIterator it(ops.stiffness, k); it; ++it)
                trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()),
                                   it.value());
        for (Eigen::Index i = 0; i < n; ++i) {
            trips.emplace_back(static_cast<int>(i), static_cast<int>(n), ops.mass(i));
            trips.emplace_back(static_cast<int>(n), static_cast<int>(i), ops.mass(i));
        }
        Eigen::SparseMatrix<double> bordered(n + 1, n + 1);
        bordered.setFromTriplets(trips.begin(), trips.end());
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(bordered);
        if (lu.info() != Eigen::Success)
            throw NumericalError("elliptic factorization failed");
        Eigen::VectorXd ext = Eigen::VectorXd::Zero(n + 1);
        ext.head(n) = rhs;
        const Eigen::VectorXd sol = lu.solve(ext);
        return sol.head(n);
    }

    // Newton iteration for  K v + M gamma(v) = rhs.
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    const double tol = 1e-12 * (1.0 + rhs.cwiseAbs().maxCoeff());
    for (int it = 0; it < 50; ++it) {
        Eigen::VectorXd gv(n), gp(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            gv(i) = gamma->value(v(i));
            gp(i) = gamma->derivative(v(i));
        }
        const Eigen::VectorXd residual = ops.stiffness * v + ops.mass.cwiseProduct(gv) - rhs;
        if (residual.cwiseAbs().maxCoeff() <= tol) return v;
        Eigen::SparseMatrix<double> jac = ops.stiffness;
        for (Eigen::Index i = 0; i < n; ++i)
            jac.coeffRef(i, i) += ops.mass(i) * gp(i);
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(jac);
        if (lu.info() != Eigen::Success)
            throw NumericalError("elliptic Jacobian factorization failed");
        v -= lu.solve(residual);
    }
    throw NumericalError("elliptic Newton iteration did not converge");
}

}  // namespace chstrip::spectral
