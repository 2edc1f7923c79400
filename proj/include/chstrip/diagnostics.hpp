#pragma once

#include <Eigen/Dense>
#include <vector>

#include "chstrip/dynamics.hpp"
#include "chstrip/trajectory.hpp"

namespace chstrip::diagnostics {

/// max_t |mean(t) - mean(0)|.
double mass_drift(const dynamics::TrajectoryRecord& rec);

/// Row-wise energy balance. residual(t) collects
///   E(t) - E(0) + dissipation(t) - work(t)
/// and decays linearly with the step size for the implicit stepper.
struct LedgerRow {
    double t = 0.0;
    double energy = 0.0;
    double dissipation = 0.0;
    double work = 0.0;
    double residual = 0.0;
};

std::vector<LedgerRow> energy_ledger(const dynamics::TrajectoryRecord& rec);

/// Distance of the reconstructed state from the pure phases -+1.
struct SeparationReport {
    double min_margin = 0.0;
    double initial_margin = 0.0;
    double final_margin = 0.0;
};

SeparationReport separation_report(const dynamics::TrajectoryRecord& rec);

/// Running suprema of the quantities controlled by the a priori estimate.
struct BoundReport {
    double max_v_norm_sq = 0.0;  // |rho|_H^2 + a(rho, rho)
    double max_beta_l1 = 0.0;    // L1 quadrature of both regularized graphs
    double max_energy = 0.0;
};

BoundReport bound_monitor(const dynamics::GalerkinSystem& sys,
                          const dynamics::TrajectoryRecord& rec);

/// Left-hand side of the stability estimate for two runs on the same grid:
///   sup_t |diff|_* + (int_0^T |diff|_calV^2 dt)^{1/2} + sup_t (diff_rate^T B diff_rate)^{1/2}
/// with rates taken as backward differences of the recorded states and the
/// time integral by trapezoid over the shared recording instants.
double dependence_lhs(const dynamics::GalerkinSystem& sys,
                      const dynamics::TrajectoryRecord& a,
                      const dynamics::TrajectoryRecord& b);

struct DependenceParams {
    Eigen::VectorXd initial;               // modal initial state shared by all runs
    velocity::VelocityField perturbation;  // direction w; the runs use u + delta w
    std::vector<double> deltas;
    dynamics::IntegrateOptions opts;
};

struct DependenceResult {
    std::vector<double> delta;
    std::vector<double> lhs;
    std::vector<double> rhs;    // |delta w|_{L^2(0,T;L^3)}
    std::vector<double> ratio;  // lhs / rhs, the fitted stability constant
};

DependenceResult continuous_dependence(const dynamics::GalerkinSystem& sys,
                                       const DependenceParams& params);

struct EpsStudyParams {
    Eigen::VectorXd initial;     // modal
    std::vector<double> ladder;  // regularization scales, strictly decreasing
    dynamics::IntegrateOptions opts;
};

struct EpsResult {
    std::vector<double> eps;
    std::vector<double> cauchy_diff;  // sup_t H-distance to the previous rung (first row 0)
    std::vector<double> beta_norm;    // max_beta_l1 of the rung
};

EpsResult epsilon_refinement(const dynamics::GalerkinSystem& sys,
                             const EpsStudyParams& params);

}  // namespace chstrip::diagnostics
