#pragma once

#include <Eigen/Dense>
#include <vector>

namespace chstrip::dynamics {

/// Time series of a Galerkin run, sampled on the recording cadence (the
/// initial and final states are always included). `dissipation` and `work`
/// are cumulative time integrals over all computed substeps up to the
/// recorded instant, so the energy ledger can be replayed exactly.
struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> rho;  // modal coefficients
    std::vector<Eigen::VectorXd> mu;   // modal coefficients
    std::vector<double> mass;          // generalized mean
    std::vector<double> energy;
    std::vector<double> min_value;     // nodal min of the reconstructed state
    std::vector<double> max_value;
    std::vector<double> dissipation;   // int mu' D mu + kappa |mu|^2 + rho' B rho'
    std::vector<double> work;          // int mu^T U rho

    long total_newton_iterations = 0;
    int step_halvings = 0;

    std::size_t size() const { return times.size(); }
};

}  // namespace chstrip::dynamics
