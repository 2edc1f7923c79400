#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>

#include "chstrip/mesh.hpp"

namespace chstrip::spectral {

/// The lowest part of the spectrum of  K v = lambda M v.  Columns of `modes`
/// are M-orthonormal and sorted by ascending eigenvalue; the first mode is the
/// exact constant with eigenvalue pinned to zero, so projecting onto it reads
/// off the generalized mean (times sqrt of the total measure).
struct EigenBasis {
    Eigen::MatrixXd modes;        // dofs x n_modes
    Eigen::VectorXd eigenvalues;  // ascending, eigenvalues[0] == 0
    Eigen::VectorXd mass;         // diagonal of M
    double total_measure = 0.0;

    int n_modes() const { return static_cast<int>(modes.cols()); }
    Eigen::Index dofs() const { return modes.rows(); }
};

EigenBasis eigendecompose(const mesh::DiscreteOperators& ops, int n_modes);

/// c_j = <v, e^j>_H.
Eigen::VectorXd project(const EigenBasis& basis, const Eigen::VectorXd& values);

/// sum_j c_j e^j as nodal values.
Eigen::VectorXd reconstruct(const EigenBasis& basis, const Eigen::VectorXd& coeffs);

/// Inverse of the stiffness form on the zero-mean subspace, resolved in the
/// eigenbasis: divide coefficients j >= 2 by lambda_j. The input must have
/// zero generalized mean; the output does.
Eigen::VectorXd apply_n_operator(const EigenBasis& basis, const Eigen::VectorXd& values);

/// sqrt(sum_{j>=2} c_j^2 / lambda_j) on modal coefficients; the first
/// coefficient must vanish (zero generalized mean).
double star_norm(const EigenBasis& basis, const Eigen::VectorXd& coeffs);

/// Monotone zeroth-order term of the elliptic problem below.
struct EllipticGamma {
    std::function<double(double)> value;
    std::function<double(double)> derivative;  // >= 0
};

/// Solve the coupled elliptic problem
///   K v + M gamma(v) = data,   data_i = bulk_w_i g_i + boundary_w_i g_G_i,
/// where the bulk datum g lives on all nodes and the boundary datum g_G is an
/// independent vector over the two boundary circles (bottom row first, then
/// top row, nx entries each). Without gamma the datum must have zero weighted
/// sum and the solution is normalized to zero generalized mean.
Eigen::VectorXd solve_elliptic(const mesh::DiscreteOperators& ops,
                               const Eigen::VectorXd& bulk_data,
                               const Eigen::VectorXd& boundary_data,
                               const std::optional<EllipticGamma>& gamma);

}  // namespace chstrip::spectral
