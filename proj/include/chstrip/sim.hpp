#pragma once

#include "chstrip/config.hpp"
#include "chstrip/dynamics.hpp"

namespace chstrip::cli {

struct SimComponents {
    RunConfig config;
    dynamics::GalerkinSystem system;  // owns copies of ops and basis
    velocity::VelocityField velocity;
    velocity::FieldValidation field_check;
    Eigen::VectorXd rho0;  // modal initial state
};

velocity::VelocityField build_velocity(const RunConfig& cfg);
mesh::FunctionPair build_initial_datum(const RunConfig& cfg, const mesh::StripMesh& grid);
dynamics::IntegrateOptions integrate_options(const RunConfig& cfg);

/// Validate the configuration, assemble every component, and run the
/// admissibility checks (graph domain inclusion, field tangency, interior
/// initial mean).
SimComponents build_components(const RunConfig& cfg);

dynamics::TrajectoryRecord run_trajectory(const SimComponents& sim);

}  // namespace chstrip::cli
