#pragma once

#include <Eigen/Dense>

#include "chstrip/mesh.hpp"
#include "chstrip/potentials.hpp"
#include "chstrip/spectral.hpp"
#include "chstrip/trajectory.hpp"
#include "chstrip/velocity.hpp"

namespace chstrip::dynamics {

/// The reduced evolution in the resolved eigenbasis,
///   (Dn^{-1} + B) rho' + (D - Dn^{-1} U) rho + F(rho) = 0,
/// where D = diag(lambda_j), Dn = diag(lambda_j + kappa), B is the
/// tau-weighted Gram matrix and F collects the regularized potentials.
/// kappa > 0 leaks mass at the exact rate rho_1' = -kappa mu_1; at kappa = 0
/// the first coefficient is frozen and the system is solved on modes >= 2.
struct GalerkinSystem {
    mesh::DiscreteOperators ops;
    spectral::EigenBasis basis;
    potentials::PotentialSplit bulk;
    potentials::PotentialSplit boundary;
    potentials::YosidaParams yosida;
    double tau_bulk = 1.0;
    double tau_boundary = 1.0;
    double kappa = 0.0;

    Eigen::MatrixXd b_matrix;       // B
    Eigen::MatrixXd advection;      // U, skew with conserved first mode
    Eigen::MatrixXd advection_raw;  // quadrature values before projection
    Eigen::VectorXd dn;             // lambda_j + kappa

    int n_modes() const { return basis.n_modes(); }
};

GalerkinSystem assemble_system(const mesh::DiscreteOperators& ops, const spectral::EigenBasis& basis,
                               const potentials::PotentialSplit& bulk, const potentials::PotentialSplit& boundary,
                               const potentials::YosidaParams& yosida, double tau_bulk,
                               double tau_boundary, double kappa,
                               const velocity::VelocityField& velocity);

/// u_ij = int_Omega e^j (u . grad e^i) by nodal quadrature.
Eigen::MatrixXd advection_matrix_raw(const mesh::DiscreteOperators& ops, const spectral::EigenBasis& basis,
                                     const velocity::VelocityField& velocity);

/// Skew part of the raw matrix with the first row and column zeroed: the
/// exact values there vanish (constant mode), so the projection restores both
/// the quadratic invariant rho^T U rho = 0 and exact mass conservation.
Eigen::MatrixXd skew_project(const Eigen::MatrixXd& raw);

/// F(rho): modal load of beta_eps + pi (bulk) and beta_{G,eps eta} + pi_G
/// (boundary) evaluated on the reconstructed state.
Eigen::VectorXd nonlinear_term(const GalerkinSystem& sys, const Eigen::VectorXd& rho);
Eigen::MatrixXd nonlinear_jacobian(const GalerkinSystem& sys, const Eigen::VectorXd& rho);

/// E(rho) = 1/2 rho^T D rho + quadrature of the regularized double wells.
double energy(const GalerkinSystem& sys, const Eigen::VectorXd& rho);

/// mu = B rho' + D rho + F(rho).
Eigen::VectorXd chemical_potential(const GalerkinSystem& sys, const Eigen::VectorXd& rho,
                                   const Eigen::VectorXd& rho_dot);

/// Consistent initial slope: solve (Dn^{-1} + B) rho' = -(V rho + F(rho)).
Eigen::VectorXd initial_slope(const GalerkinSystem& sys, const Eigen::VectorXd& rho);

/// H-projection of a nodal state onto the basis; rejects data whose
/// generalized mean is not interior to both graph domains.
Eigen::VectorXd project_initial_datum(const GalerkinSystem& sys, const mesh::FunctionPair& datum);

enum class Stepper { BackwardEuler, ConvexSplit };
Stepper stepper_from_name(const std::string& name);
std::string stepper_name(Stepper s);

struct StepResult {
    Eigen::VectorXd rho;
    Eigen::VectorXd mu;
    int newton_iterations = 0;
};

/// One implicit step; throws NumericalError when Newton stalls.
StepResult step_backward_euler(const GalerkinSystem& sys, const Eigen::VectorXd& rho,
                               double dt, double newton_tol);

/// One semi-implicit step: beta and the stiffness implicit, pi and the
/// advection explicit. With u = 0 the energy is non-increasing for every dt.
StepResult step_convex_split(const GalerkinSystem& sys, const Eigen::VectorXd& rho,
                             double dt, double newton_tol);

struct IntegrateOptions {
    double dt = 1e-3;
    double t_end = 1.0;
    Stepper stepper = Stepper::BackwardEuler;
    double newton_tol = 1e-11;
    int output_every = 1;
    int max_halvings = 10;
};

/// March to t_end on the uniform grid, halving a failed step (recursively,
/// up to max_halvings levels) before giving up.
TrajectoryRecord integrate(const GalerkinSystem& sys, const Eigen::VectorXd& rho0,
                           const IntegrateOptions& opts);

}  // namespace chstrip::dynamics
