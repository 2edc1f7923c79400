#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <vector>

#include "chstrip/config.hpp"
#include "chstrip/errors.hpp"
#include "chstrip/io.hpp"
#include "chstrip/sim.hpp"

using namespace chstrip;

namespace {

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) out.push_back(line);
    return out;
}

const char* kFullConfig = R"(# full configuration
mesh.nx = 10
mesh.ny = 9
mesh.lx = 2.5
mesh.ly = 1.5

potential.bulk = log          # alias spelling
potential.boundary = logarithmic
potential.eps = 0.05
potential.eta = 2
potential.c = 1.75
dynamics.tau_bulk = 0.5
dynamics.tau_bdry = 2
dynamics.kappa = 0.01
dynamics.n_modes = 20
dynamics.dt = 0.002
dynamics.t_end = 0.25
dynamics.stepper = split
dynamics.newton_tol = 1e-10
dynamics.output_every = 4
velocity.kind = stream
velocity.amplitude = 0.75
velocity.mode = 2
initial.kind = random
initial.mean = 0.1
initial.amplitude = 0.3
initial.mode = 3
initial.seed = 42
experiment.kind = dependence
experiment.deltas = 0.1, 0.05
experiment.eps_ladder = 0.1,0.05,  0.025
experiment.perturbation_kind = stream
experiment.perturbation_amplitude = 0.5
experiment.perturbation_mode = 2
)";

}  // namespace

TEST_CASE("config text parses every key family, comments and whitespace") {
    const cli::RunConfig cfg = cli::parse_config_text(kFullConfig);
    CHECK(cfg.nx == 10);
    CHECK(cfg.ny == 9);
    CHECK(cfg.lx == 2.5);
    CHECK(cfg.ly == 1.5);
    CHECK(cfg.bulk == "log");
    CHECK(cfg.boundary == "logarithmic");
    CHECK(cfg.eps == 0.05);
    CHECK(cfg.eta == 2.0);
    CHECK(cfg.c == 1.75);
    CHECK(cfg.tau_bulk == 0.5);
    CHECK(cfg.tau_bdry == 2.0);
    CHECK(cfg.kappa == 0.01);
    CHECK(cfg.n_modes == 20);
    CHECK(cfg.dt == 0.002);
    CHECK(cfg.t_end == 0.25);
    CHECK(cfg.stepper == "split");
    CHECK(cfg.newton_tol == 1e-10);
    CHECK(cfg.output_every == 4);
    CHECK(cfg.velocity_kind == "stream");
    CHECK(cfg.velocity_amplitude == 0.75);
    CHECK(cfg.velocity_mode == 2);
    CHECK(cfg.initial_kind == "random");
    CHECK(cfg.initial_mean == 0.1);
    CHECK(cfg.initial_amplitude == 0.3);
    CHECK(cfg.initial_mode == 3);
    CHECK(cfg.seed == 42);
    CHECK(cfg.experiment == "dependence");
    CHECK(cfg.deltas == std::vector<double>{0.1, 0.05});
    CHECK(cfg.eps_ladder == std::vector<double>{0.1, 0.05, 0.025});
    CHECK(cfg.perturbation_kind == "stream");
    CHECK(cfg.perturbation_amplitude == 0.5);
    CHECK(cfg.perturbation_mode == 2);
    CHECK_NOTHROW(cli::validate_config(cfg));
}

TEST_CASE("parser errors carry line numbers and offending keys") {
    CHECK_THROWS_WITH_AS(cli::parse_config_text("mesh.nx = 8\nbogus.key = 1\n"),
                         "line 2: unknown key 'bogus.key'", ConfigError);
    CHECK_THROWS_WITH_AS(cli::parse_config_text("mesh.nx = 8\n\nmesh.nx = 9\n"),
                         "line 3: duplicate key 'mesh.nx'", ConfigError);
    CHECK_THROWS_WITH_AS(cli::parse_config_text("mesh.nx\n"),
                         "line 1: expected key=value", ConfigError);
    CHECK_THROWS_WITH_AS(cli::parse_config_text("mesh.nx = abc\n"),
                         "bad integer value for mesh.nx: 'abc'", ConfigError);
    CHECK_THROWS_WITH_AS(cli::parse_config_text("mesh.lx = 1..0\n"),
                         "bad numeric value for mesh.lx: '1..0'", ConfigError);
    CHECK_THROWS_WITH_AS(cli::parse_config_text("initial.seed = -3\n"),
                         "initial.seed must be nonnegative", ConfigError);
    CHECK_THROWS_AS(cli::parse_config_file("does_not_exist.conf"), ConfigError);
}

TEST_CASE("validation names the offending key") {
    auto broken = [](auto&& mutate) {
        cli::RunConfig cfg;
        mutate(cfg);
        return cfg;
    };
    CHECK_THROWS_WITH_AS(
        cli::validate_config(broken([](cli::RunConfig& c) { c.eps = 0.0; })),
        "potential.eps must be positive", ConfigError);
    CHECK_THROWS_WITH_AS(
        cli::validate_config(broken([](cli::RunConfig& c) { c.nx = 3; })),
        "mesh.nx must be >= 4", ConfigError);
    CHECK_THROWS_WITH_AS(
        cli::validate_config(broken([](cli::RunConfig& c) { c.n_modes = 32 * 33 + 1; })),
        "dynamics.n_modes exceeds mesh dofs", ConfigError);
    CHECK_THROWS_WITH_AS(
        cli::validate_config(broken([](cli::RunConfig& c) { c.stepper = "rk4"; })),
        "dynamics.stepper must be backward_euler or convex_split", ConfigError);
    CHECK_THROWS_WITH_AS(
        cli::validate_config(broken([](cli::RunConfig& c) { c.velocity_kind = "vortex"; })),
        "velocity.kind must be none, shear or stream", ConfigError);
    CHECK_THROWS_WITH_AS(
        cli::validate_config(broken([](cli::RunConfig& c) { c.initial_kind = "spinodal"; })),
        "initial.kind must be constant, cosine, cosine_y or random", ConfigError);
    CHECK_THROWS_WITH_AS(
        cli::validate_config(broken([](cli::RunConfig& c) { c.experiment = "sweep"; })),
        "experiment.kind must be none, dependence or eps_refinement", ConfigError);
    CHECK_THROWS_WITH_AS(
        cli::validate_config(broken([](cli::RunConfig& c) { c.eps_ladder = {0.1, 0.1}; })),
        "experiment.eps_ladder must decrease", ConfigError);
    CHECK_THROWS_WITH_AS(
        cli::validate_config(broken([](cli::RunConfig& c) { c.perturbation_amplitude = 0.0; })),
        "experiment.perturbation_amplitude must be positive", ConfigError);
    CHECK_THROWS_WITH_AS(
        cli::validate_config(broken([](cli::RunConfig& c) { c.bulk = "sextic"; })),
        "potential.bulk must name a known graph", ConfigError);
}

TEST_CASE("canonical rendering is sorted, stable and reparseable") {
    const cli::RunConfig cfg = cli::parse_config_text(kFullConfig);
    const std::string canon = cli::canonical_config(cfg);
    const auto rows = lines_of(canon);
    REQUIRE(rows.size() > 20);
    for (std::size_t k = 1; k < rows.size(); ++k) {
        const std::string a = rows[k - 1].substr(0, rows[k - 1].find('='));
        const std::string b = rows[k].substr(0, rows[k].find('='));
        CHECK(a < b);
    }
    CHECK(canon == cli::canonical_config(cfg));

    const cli::RunConfig reparsed = cli::parse_config_text(canon);
    CHECK(cli::canonical_config(reparsed) == canon);
    CHECK(cli::config_hash(reparsed) == cli::config_hash(cfg));

    // defaults round-trip too, including the empty ladder
    const cli::RunConfig defaults;
    const std::string dcanon = cli::canonical_config(defaults);
    CHECK(cli::canonical_config(cli::parse_config_text(dcanon)) == dcanon);
}

TEST_CASE("hash separates configurations and renders as 16 hex digits") {
    cli::RunConfig a;
    cli::RunConfig b;
    CHECK(cli::config_hash(a) == cli::config_hash(b));
    b.nx = 33;
    CHECK(cli::config_hash(a) != cli::config_hash(b));
    b = a;
    b.seed = 1;
    CHECK(cli::config_hash(a) != cli::config_hash(b));

    const std::string hex = cli::hash_hex(cli::config_hash(a));
    CHECK(hex.size() == 16);
    CHECK(hex.find_first_not_of("0123456789abcdef") == std::string::npos);
    CHECK(cli::hash_hex(0xdeadbeefull) == "00000000deadbeef");
}

TEST_CASE("initial data builders realize the configured profiles") {
    const auto grid = mesh::build_strip_mesh(8, 5, 2.0, 1.0);

    cli::RunConfig cfg;
    cfg.initial_kind = "constant";
    cfg.initial_mean = 0.3;
    const auto flat = cli::build_initial_datum(cfg, grid);
    CHECK((flat.values.array() - 0.3).abs().maxCoeff() == 0.0);

    cfg.initial_kind = "cosine";
    cfg.initial_mean = 0.1;
    cfg.initial_amplitude = 0.2;
    cfg.initial_mode = 2;
    cfg.lx = grid.lx;
    cfg.ly = grid.ly;
    const auto wave = cli::build_initial_datum(cfg, grid);
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            const double expect =
                0.1 + 0.2 * std::cos(2.0 * std::numbers::pi * 2.0 * grid.x(i) / grid.lx);
            CHECK(wave.values[grid.index(i, j)] == doctest::Approx(expect).epsilon(1e-14));
        }

    cfg.initial_kind = "cosine_y";
    cfg.initial_mode = 1;
    const auto ywave = cli::build_initial_datum(cfg, grid);
    for (int j = 0; j < grid.ny; ++j) {
        const double expect = 0.1 + 0.2 * std::cos(std::numbers::pi * grid.y(j) / grid.ly);
        CHECK(ywave.values[grid.index(3, j)] == doctest::Approx(expect).epsilon(1e-14));
    }

    cfg.initial_kind = "random";
    cfg.seed = 7;
    const auto noise_a = cli::build_initial_datum(cfg, grid);
    const auto noise_b = cli::build_initial_datum(cfg, grid);
    CHECK((noise_a.values - noise_b.values).cwiseAbs().maxCoeff() == 0.0);
    CHECK((noise_a.values.array() - 0.1).abs().maxCoeff() <= 0.2);
    cfg.seed = 8;
    const auto noise_c = cli::build_initial_datum(cfg, grid);
    CHECK((noise_a.values - noise_c.values).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("velocity and stepper options map through the configuration") {
    const auto grid = mesh::build_strip_mesh(8, 5, 2.0, 1.0);
    cli::RunConfig cfg;
    cfg.lx = grid.lx;
    cfg.ly = grid.ly;

    cfg.velocity_kind = "none";
    auto s = velocity::sample_velocity(cli::build_velocity(cfg), grid);
    CHECK(s.ux.cwiseAbs().maxCoeff() == 0.0);
    CHECK(s.uy.cwiseAbs().maxCoeff() == 0.0);

    cfg.velocity_kind = "shear";
    cfg.velocity_amplitude = 0.7;
    s = velocity::sample_velocity(cli::build_velocity(cfg), grid);
    const auto ref = velocity::sample_velocity(velocity::shear_field(0.7, grid.ly), grid);
    CHECK((s.ux - ref.ux).cwiseAbs().maxCoeff() == 0.0);
    CHECK((s.uy - ref.uy).cwiseAbs().maxCoeff() == 0.0);

    cfg.velocity_kind = "stream";
    cfg.velocity_mode = 2;
    s = velocity::sample_velocity(cli::build_velocity(cfg), grid);
    const auto sref =
        velocity::sample_velocity(velocity::stream_function_field(0.7, 2, grid.lx, grid.ly), grid);
    CHECK((s.ux - sref.ux).cwiseAbs().maxCoeff() == 0.0);
    CHECK((s.uy - sref.uy).cwiseAbs().maxCoeff() == 0.0);

    cfg.dt = 0.002;
    cfg.t_end = 0.5;
    cfg.stepper = "split";
    cfg.newton_tol = 1e-9;
    cfg.output_every = 3;
    const auto opts = cli::integrate_options(cfg);
    CHECK(opts.dt == 0.002);
    CHECK(opts.t_end == 0.5);
    CHECK(opts.stepper == dynamics::Stepper::ConvexSplit);
    CHECK(opts.newton_tol == 1e-9);
    CHECK(opts.output_every == 3);
}

TEST_CASE("component assembly runs the admissibility gates") {
    cli::RunConfig cfg;
    cfg.nx = 8;
    cfg.ny = 5;
    cfg.n_modes = 10;
    cfg.velocity_kind = "shear";
    cfg.velocity_amplitude = 0.5;
    cfg.initial_kind = "cosine";
    cfg.initial_mean = 0.1;
    cfg.initial_amplitude = 0.2;
    cfg.dt = 5e-3;
    cfg.t_end = 0.01;

    const auto sim = cli::build_components(cfg);
    CHECK(sim.system.n_modes() == 10);
    CHECK(sim.rho0.size() == 10);
    CHECK(sim.field_check.tangential(1e-12 * 1.5));

    const auto rec = cli::run_trajectory(sim);
    CHECK(rec.size() == 3);
    CHECK(rec.times.back() == doctest::Approx(0.01).epsilon(1e-12));

    cfg.bulk = "log";
    cfg.boundary = "log";
    cfg.initial_kind = "constant";
    cfg.initial_mean = 1.0;  // on the domain edge, not interior
    CHECK_THROWS_AS(cli::build_components(cfg), PreconditionError);

    cfg.initial_mean = 0.1;
    cfg.n_modes = 8 * 5 + 1;
    CHECK_THROWS_AS(cli::build_components(cfg), ConfigError);
}

TEST_CASE("csv writers stamp the hash line and rewrite byte-identically") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "chstrip_io_test";
    fs::create_directories(dir);

    dynamics::TrajectoryRecord rec;
    for (int k = 0; k < 2; ++k) {
        Eigen::VectorXd c(3);
        c << 0.5, -0.25 * k, 1.0 / 3.0;
        rec.times.push_back(0.1 * k);
        rec.rho.push_back(c);
        rec.mu.push_back(2.0 * c);
        rec.mass.push_back(0.5);
        rec.energy.push_back(1.0 - 0.1 * k);
        rec.min_value.push_back(-0.25 * k);
        rec.max_value.push_back(0.5);
        rec.dissipation.push_back(0.05 * k);
        rec.work.push_back(0.01 * k);
    }

    const std::uint64_t hash = 0xdeadbeefull;
    const fs::path a = dir / "traj_a.csv";
    const fs::path b = dir / "traj_b.csv";
    cli::write_trajectory_csv(a.string(), rec, hash);
    cli::write_trajectory_csv(b.string(), rec, hash);
    const std::string text = slurp(a);
    CHECK(text == slurp(b));
    const auto rows = lines_of(text);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == "# config=00000000deadbeef");
    CHECK(rows[1] == "t,rho_1,rho_2,rho_3,mu_1,mu_2,mu_3,mass,energy,min_rho,max_rho");
    CHECK(rows[2].rfind("0,0.5,-0,0.33333333333333331,", 0) == 0);

    const fs::path lp = dir / "ledger.csv";
    cli::write_ledger_csv(lp.string(), rec, hash);
    const auto lrows = lines_of(slurp(lp));
    REQUIRE(lrows.size() == 4);
    CHECK(lrows[1] == "t,energy,dissipation,work,residual");

    diagnostics::DependenceResult dres;
    dres.delta = {0.1};
    dres.lhs = {0.25};
    dres.rhs = {0.5};
    dres.ratio = {0.5};
    const fs::path dp = dir / "dep.csv";
    cli::write_dependence_csv(dp.string(), dres, hash);
    const auto drows = lines_of(slurp(dp));
    REQUIRE(drows.size() == 3);
    CHECK(drows[1] == "delta,lhs,rhs,ratio");
    CHECK(drows[2] == "0.10000000000000001,0.25,0.5,0.5");

    diagnostics::EpsResult eres;
    eres.eps = {0.1, 0.05};
    eres.cauchy_diff = {0.0, 0.125};
    eres.beta_norm = {1.0, 1.5};
    const fs::path ep = dir / "eps.csv";
    cli::write_eps_study_csv(ep.string(), eres, hash);
    const auto erows = lines_of(slurp(ep));
    REQUIRE(erows.size() == 4);
    CHECK(erows[1] == "eps,cauchy_diff,beta_norm");
    CHECK(erows[3] == "0.050000000000000003,0.125,1.5");

    const fs::path sp = dir / "summary.txt";
    cli::write_summary(sp.string(), {{"alpha", "1"}, {"beta", "two"}}, hash);
    const auto srows = lines_of(slurp(sp));
    REQUIRE(srows.size() == 3);
    CHECK(srows[0] == "config=00000000deadbeef");
    CHECK(srows[1] == "alpha=1");
    CHECK(srows[2] == "beta=two");

    fs::remove_all(dir);
}
