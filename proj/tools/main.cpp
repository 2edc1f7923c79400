#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <iostream>

#include "chstrip/config.hpp"
#include "chstrip/diagnostics.hpp"
#include "chstrip/errors.hpp"
#include "chstrip/io.hpp"
#include "chstrip/sim.hpp"

namespace fs = std::filesystem;
using namespace chstrip;

namespace {

std::vector<double> compat_samples() {
    std::vector<double> s;
    for (int k = 0; k <= 2000; ++k) s.push_back(-2.5 + 0.0025 * k);
    return s;
}

// Fitted constants of the domination and coercivity inequalities for the
// configured pair of graphs; reported rather than thresholded.
struct CompatSummary {
    double compat_c = 0.0;
    double compat_c_eta = 0.0;
    double coercivity_delta0 = 0.0;
    double coercivity_c0 = 0.0;
};

CompatSummary compat_summary(const cli::SimComponents& sim) {
    const auto& sys = sim.system;
    const auto samples = compat_samples();
    const auto rep = potentials::check_compatibility(
        sys.bulk.graph, sys.boundary.graph, sys.yosida.eta, 0.0, sys.yosida, samples);
    const double mean = sim.rho0(0) / std::sqrt(sys.basis.mass.sum());
    const auto fit = potentials::coercivity_check(sys.boundary.graph,
                                                  sys.yosida.boundary_step(), mean, samples);
    return {rep.max_yosida_violation, rep.fitted_c_eta, fit.delta0, fit.c0};
}

int run_command(const std::string& config_path, const std::string& output_dir,
                bool dump_spectrum, long seed_override) {
    cli::RunConfig cfg = cli::parse_config_file(config_path);
    if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);

    const cli::SimComponents sim = cli::build_components(cfg);
    const std::uint64_t hash = cli::config_hash(cfg);
    fs::create_directories(output_dir);
    auto out = [&](const char* name) { return (fs::path(output_dir) / name).string(); };

    const dynamics::TrajectoryRecord rec = cli::run_trajectory(sim);
    cli::write_trajectory_csv(out("trajectory.csv"), rec, hash);
    cli::write_ledger_csv(out("ledger.csv"), rec, hash);
    if (dump_spectrum) cli::write_spectrum_csv(out("spectrum.csv"), sim.system.basis, hash);

    if (cfg.experiment == "dependence") {
        diagnostics::DependenceParams params;
        params.initial = sim.rho0;
        params.perturbation =
            cfg.perturbation_kind == "shear"
                ? velocity::shear_field(cfg.perturbation_amplitude, cfg.ly)
                : velocity::stream_function_field(cfg.perturbation_amplitude,
                                                  cfg.perturbation_mode, cfg.lx, cfg.ly);
        params.deltas = cfg.deltas;
        params.opts = cli::integrate_options(cfg);
        params.opts.output_every = 1;
        cli::write_dependence_csv(out("dependence.csv"),
                                  diagnostics::continuous_dependence(sim.system, params), hash);
    } else if (cfg.experiment == "eps_refinement") {
        diagnostics::EpsStudyParams params;
        params.initial = sim.rho0;
        params.ladder = cfg.eps_ladder;
        if (params.ladder.empty())
            for (int r = 0; r < 4; ++r) params.ladder.push_back(cfg.eps / (1 << r));
        params.opts = cli::integrate_options(cfg);
        params.opts.output_every = 1;
        cli::write_eps_study_csv(out("eps_study.csv"),
                                 diagnostics::epsilon_refinement(sim.system, params), hash);
    }

    const auto ledger = diagnostics::energy_ledger(rec);
    const auto sep = diagnostics::separation_report(rec);
    const auto bounds = diagnostics::bound_monitor(sim.system, rec);
    const auto compat = compat_summary(sim);
    std::map<std::string, std::string> kv;
    kv["dofs"] = std::to_string(sim.system.ops.mesh.dofs());
    kv["n_modes"] = std::to_string(sim.system.n_modes());
    kv["lambda_2"] = cli::format_double(sim.system.basis.eigenvalues(1));
    kv["stepper"] = cfg.stepper;
    kv["t_end"] = cli::format_double(cfg.t_end);
    kv["mass_drift"] = cli::format_double(diagnostics::mass_drift(rec));
    kv["final_energy"] = cli::format_double(rec.energy.back());
    kv["final_residual"] = cli::format_double(ledger.back().residual);
    kv["min_margin"] = cli::format_double(sep.min_margin);
    kv["max_v_norm_sq"] = cli::format_double(bounds.max_v_norm_sq);
    kv["max_beta_l1"] = cli::format_double(bounds.max_beta_l1);
    kv["total_newton_iterations"] = std::to_string(rec.total_newton_iterations);
    kv["step_halvings"] = std::to_string(rec.step_halvings);
    kv["velocity_l2l3"] =
        cli::format_double(velocity::l2l3_norm(sim.velocity, sim.system.ops.mesh, cfg.t_end));
    kv["field_max_normal"] = cli::format_double(sim.field_check.max_boundary_normal);
    kv["field_max_divergence"] = cli::format_double(sim.field_check.max_discrete_divergence);
    kv["domain_inclusion"] =
        potentials::domain_compatible(sim.system.bulk.graph.kind,
                                      sim.system.boundary.graph.kind)
            ? "ok"
            : "violated";
    kv["compat_c"] = cli::format_double(compat.compat_c);
    kv["compat_c_eta"] = cli::format_double(compat.compat_c_eta);
    kv["coercivity_delta0"] = cli::format_double(compat.coercivity_delta0);
    kv["coercivity_c0"] = cli::format_double(compat.coercivity_c0);
    cli::write_summary(out("summary.txt"), kv, hash);

    std::cout << "run complete: " << rec.size() << " records, mass drift "
              << kv["mass_drift"] << ", final energy " << kv["final_energy"]
              << ", outputs in " << output_dir << "\n";
    return 0;
}

int validate_command(const std::string& config_path) {
    const cli::RunConfig cfg = cli::parse_config_file(config_path);
    const cli::SimComponents sim = cli::build_components(cfg);
    const auto compat = compat_summary(sim);
    std::cout << "config " << cli::hash_hex(cli::config_hash(cfg)) << " ok\n"
              << "  dofs " << sim.system.ops.mesh.dofs() << ", n_modes "
              << sim.system.n_modes() << ", lambda_2 "
              << cli::format_double(sim.system.basis.eigenvalues(1)) << "\n"
              << "  velocity: max |u.nu| " << sim.field_check.max_boundary_normal
              << ", max |div_h u| " << sim.field_check.max_discrete_divergence << "\n"
              << "  domain inclusion "
              << (potentials::domain_compatible(sim.system.bulk.graph.kind,
                                                sim.system.boundary.graph.kind)
                      ? "ok"
                      : "violated")
              << ", domination constant " << compat.compat_c << ", product constant "
              << compat.compat_c_eta << "\n"
              << "  coercivity delta0 " << compat.coercivity_delta0 << ", C0 "
              << compat.coercivity_c0 << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"convective Cahn-Hilliard strip solver"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output_dir = ".";
    bool dump_spectrum = false;
    long seed_override = -1;

    CLI::App* run = app.add_subcommand("run", "integrate and write CSV outputs");
    run->add_option("config", config_path, "key=value config file")->required();
    run->add_option("--output-dir", output_dir, "directory for CSV outputs");
    run->add_flag("--dump-spectrum", dump_spectrum, "also write spectrum.csv");
    run->add_option("--seed", seed_override, "override initial.seed");

    CLI::App* validate = app.add_subcommand("validate", "check a config and report constants");
    validate->add_option("config", config_path, "key=value config file")->required();

    try {
        app.parse(argc, argv);
        if (run->parsed()) return run_command(config_path, output_dir, dump_spectrum, seed_override);
        return validate_command(config_path);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const PreconditionError& e) {
        std::cerr << "precondition violated: " << e.what() << "\n";
        return 3;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
