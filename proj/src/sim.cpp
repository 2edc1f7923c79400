#include "chstrip/sim.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "chstrip/errors.hpp"

namespace chstrip::cli {

velocity::VelocityField build_velocity(const RunConfig& cfg) {
    if (cfg.velocity_kind == "shear")
        return velocity::shear_field(cfg.velocity_amplitude, cfg.ly);
    if (cfg.velocity_kind == "stream")
        return velocity::stream_function_field(cfg.velocity_amplitude, cfg.velocity_mode,
                                               cfg.lx, cfg.ly);
    return velocity::zero_field();
}

mesh::FunctionPair build_initial_datum(const RunConfig& cfg, const mesh::StripMesh& grid) {
    if (cfg.initial_kind == "constant") return mesh::constant_pair(grid, cfg.initial_mean);
    if (cfg.initial_kind == "cosine") {
        const double k = 2.0 * std::numbers::pi * cfg.initial_mode / cfg.lx;
        return mesh::sample_pair(grid, [&](double x, double) {
            return cfg.initial_mean + cfg.initial_amplitude * std::cos(k * x);
        });
    }
    if (cfg.initial_kind == "cosine_y") {
        const double k = std::numbers::pi * cfg.initial_mode / cfg.ly;
        return mesh::sample_pair(grid, [&](double, double y) {
            return cfg.initial_mean + cfg.initial_amplitude * std::cos(k * y);
        });
    }
    // seeded nodal noise; the generator is consumed in node order, so the
    // datum is a pure function of (seed, mesh)
    std::mt19937_64 gen(cfg.seed);
    mesh::FunctionPair p = mesh::constant_pair(grid, cfg.initial_mean);
    for (Eigen::Index i = 0; i < p.values.size(); ++i) {
        const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;  // [0, 1)
        p.values[i] += cfg.initial_amplitude * (2.0 * u - 1.0);
    }
    return p;
}

dynamics::IntegrateOptions integrate_options(const RunConfig& cfg) {
    dynamics::IntegrateOptions opts;
    opts.dt = cfg.dt;
    opts.t_end = cfg.t_end;
    opts.stepper = dynamics::stepper_from_name(cfg.stepper);
    opts.newton_tol = cfg.newton_tol;
    opts.output_every = cfg.output_every;
    return opts;
}

SimComponents build_components(const RunConfig& cfg) {
    validate_config(cfg);

    const auto bulk_kind = potentials::graph_kind_from_name(cfg.bulk);
    const auto boundary_kind = potentials::graph_kind_from_name(cfg.boundary);

    SimComponents sim;
    sim.config = cfg;

    const mesh::StripMesh grid = mesh::build_strip_mesh(cfg.nx, cfg.ny, cfg.lx, cfg.ly);
    const mesh::DiscreteOperators ops = mesh::assemble_operators(grid);
    const spectral::EigenBasis basis = spectral::eigendecompose(ops, cfg.n_modes);

    const auto bulk = potentials::make_split(bulk_kind, cfg.c);
    const auto boundary = potentials::make_split(boundary_kind, cfg.c);
    const potentials::YosidaParams yp{cfg.eps, cfg.eta};

    sim.velocity = build_velocity(cfg);
    sim.field_check = velocity::validate_field(sim.velocity, ops);
    if (!sim.field_check.tangential(1e-12 * (1.0 + std::abs(cfg.velocity_amplitude))))
        throw PreconditionError("velocity field is not tangential on the boundary");

    sim.system = dynamics::assemble_system(ops, basis, bulk, boundary, yp, cfg.tau_bulk,
                                           cfg.tau_bdry, cfg.kappa, sim.velocity);
    sim.rho0 = dynamics::project_initial_datum(sim.system, build_initial_datum(cfg, grid));
    return sim;
}

dynamics::TrajectoryRecord run_trajectory(const SimComponents& sim) {
    return dynamics::integrate(sim.system, sim.rho0, integrate_options(sim.config));
}

}  // namespace chstrip::cli
