#include "chstrip/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "chstrip/errors.hpp"

namespace chstrip::cli {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        if (!std::isfinite(x)) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value for " + key + ": '" + v + "'");
    }
}

long parse_int(const std::string& key, const std::string& v) {
    long x = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc{} || p != v.data() + v.size())
        throw ConfigError("bad integer value for " + key + ": '" + v + "'");
    return x;
}

// an empty value is an empty list, so canonical output reparses
std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(key, item));
    }
    return out;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::map<std::string, std::function<void(const std::string&, const std::string&)>> setters;
    auto d = [&](const char* key, double& field) {
        setters[key] = [&field](const std::string& k, const std::string& v) {
            field = parse_double(k, v);
        };
    };
    auto i = [&](const char* key, int& field) {
        setters[key] = [&field](const std::string& k, const std::string& v) {
            field = static_cast<int>(parse_int(k, v));
        };
    };
    auto s = [&](const char* key, std::string& field) {
        setters[key] = [&field](const std::string&, const std::string& v) { field = v; };
    };
    auto l = [&](const char* key, std::vector<double>& field) {
        setters[key] = [&field](const std::string& k, const std::string& v) {
            field = parse_list(k, v);
        };
    };

    i("mesh.nx", cfg.nx);
    i("mesh.ny", cfg.ny);
    d("mesh.lx", cfg.lx);
    d("mesh.ly", cfg.ly);
    s("potential.bulk", cfg.bulk);
    s("potential.boundary", cfg.boundary);
    d("potential.eps", cfg.eps);
    d("potential.eta", cfg.eta);
    d("potential.c", cfg.c);
    d("dynamics.tau_bulk", cfg.tau_bulk);
    d("dynamics.tau_bdry", cfg.tau_bdry);
    d("dynamics.kappa", cfg.kappa);
    i("dynamics.n_modes", cfg.n_modes);
    d("dynamics.dt", cfg.dt);
    d("dynamics.t_end", cfg.t_end);
    s("dynamics.stepper", cfg.stepper);
    d("dynamics.newton_tol", cfg.newton_tol);
    i("dynamics.output_every", cfg.output_every);
    s("velocity.kind", cfg.velocity_kind);
    d("velocity.amplitude", cfg.velocity_amplitude);
    i("velocity.mode", cfg.velocity_mode);
    s("initial.kind", cfg.initial_kind);
    d("initial.mean", cfg.initial_mean);
    d("initial.amplitude", cfg.initial_amplitude);
    i("initial.mode", cfg.initial_mode);
    setters["initial.seed"] = [&cfg](const std::string& k, const std::string& v) {
        const long x = parse_int(k, v);
        if (x < 0) throw ConfigError("initial.seed must be nonnegative");
        cfg.seed = static_cast<std::uint64_t>(x);
    };
    s("experiment.kind", cfg.experiment);
    l("experiment.deltas", cfg.deltas);
    l("experiment.eps_ladder", cfg.eps_ladder);
    s("experiment.perturbation_kind", cfg.perturbation_kind);
    d("experiment.perturbation_amplitude", cfg.perturbation_amplitude);
    i("experiment.perturbation_mode", cfg.perturbation_mode);

    std::set<std::string> seen;
    std::stringstream stream(text);
    std::string line;
    int lineno = 0;
    while (std::getline(stream, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end())
            throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (!seen.insert(key).second)
            throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        it->second(key, value);
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

void validate_config(const RunConfig& cfg) {
    auto require = [](bool ok, const std::string& msg) {
        if (!ok) throw ConfigError(msg);
    };
    require(cfg.nx >= 4, "mesh.nx must be >= 4");
    require(cfg.ny >= 3, "mesh.ny must be >= 3");
    require(cfg.lx > 0.0 && cfg.ly > 0.0, "mesh.lx and mesh.ly must be positive");
    require(cfg.eps > 0.0, "potential.eps must be positive");
    require(cfg.eta > 0.0, "potential.eta must be positive");
    require(cfg.tau_bulk >= 0.0 && cfg.tau_bdry >= 0.0,
            "dynamics.tau_bulk and dynamics.tau_bdry must be nonnegative");
    require(cfg.kappa >= 0.0, "dynamics.kappa must be nonnegative");
    require(cfg.n_modes >= 1, "dynamics.n_modes must be >= 1");
    require(cfg.n_modes <= cfg.nx * cfg.ny, "dynamics.n_modes exceeds mesh dofs");
    require(cfg.dt > 0.0, "dynamics.dt must be positive");
    require(cfg.t_end >= 0.0, "dynamics.t_end must be nonnegative");
    require(cfg.newton_tol > 0.0, "dynamics.newton_tol must be positive");
    require(cfg.output_every >= 1, "dynamics.output_every must be >= 1");
    require(cfg.stepper == "backward_euler" || cfg.stepper == "be" ||
                cfg.stepper == "convex_split" || cfg.stepper == "split",
            "dynamics.stepper must be backward_euler or convex_split");
    require(cfg.bulk == "regular" || cfg.bulk == "logarithmic" ||
                cfg.bulk == "double_obstacle" || cfg.bulk == "cubic" ||
                cfg.bulk == "log" || cfg.bulk == "obstacle" || cfg.bulk == "quartic",
            "potential.bulk must name a known graph");
    require(cfg.boundary == "regular" || cfg.boundary == "logarithmic" ||
                cfg.boundary == "double_obstacle" || cfg.boundary == "cubic" ||
                cfg.boundary == "log" || cfg.boundary == "obstacle" ||
                cfg.boundary == "quartic",
            "potential.boundary must name a known graph");
    require(cfg.velocity_kind == "none" || cfg.velocity_kind == "shear" ||
                cfg.velocity_kind == "stream",
            "velocity.kind must be none, shear or stream");
    require(cfg.velocity_mode >= 1, "velocity.mode must be >= 1");
    require(cfg.initial_kind == "constant" || cfg.initial_kind == "cosine" ||
                cfg.initial_kind == "cosine_y" || cfg.initial_kind == "random",
            "initial.kind must be constant, cosine, cosine_y or random");
    require(cfg.initial_mode >= 1, "initial.mode must be >= 1");
    require(cfg.experiment == "none" || cfg.experiment == "dependence" ||
                cfg.experiment == "eps_refinement",
            "experiment.kind must be none, dependence or eps_refinement");
    for (const double x : cfg.deltas)
        require(x >= 0.0, "experiment.deltas must be nonnegative");
    for (std::size_t k = 0; k < cfg.eps_ladder.size(); ++k) {
        require(cfg.eps_ladder[k] > 0.0, "experiment.eps_ladder must be positive");
        if (k) require(cfg.eps_ladder[k] < cfg.eps_ladder[k - 1],
                       "experiment.eps_ladder must decrease");
    }
    require(cfg.perturbation_kind == "shear" || cfg.perturbation_kind == "stream",
            "experiment.perturbation_kind must be shear or stream");
    require(cfg.perturbation_amplitude > 0.0,
            "experiment.perturbation_amplitude must be positive");
    require(cfg.perturbation_mode >= 1, "experiment.perturbation_mode must be >= 1");
}

std::string canonical_config(const RunConfig& cfg) {
    std::map<std::string, std::string> kv;
    kv["mesh.nx"] = std::to_string(cfg.nx);
    kv["mesh.ny"] = std::to_string(cfg.ny);
    kv["mesh.lx"] = format_double(cfg.lx);
    kv["mesh.ly"] = format_double(cfg.ly);
    kv["potential.bulk"] = cfg.bulk;
    kv["potential.boundary"] = cfg.boundary;
    kv["potential.eps"] = format_double(cfg.eps);
    kv["potential.eta"] = format_double(cfg.eta);
    kv["potential.c"] = format_double(cfg.c);
    kv["dynamics.tau_bulk"] = format_double(cfg.tau_bulk);
    kv["dynamics.tau_bdry"] = format_double(cfg.tau_bdry);
    kv["dynamics.kappa"] = format_double(cfg.kappa);
    kv["dynamics.n_modes"] = std::to_string(cfg.n_modes);
    kv["dynamics.dt"] = format_double(cfg.dt);
    kv["dynamics.t_end"] = format_double(cfg.t_end);
    kv["dynamics.stepper"] = cfg.stepper;
    kv["dynamics.newton_tol"] = format_double(cfg.newton_tol);
    kv["dynamics.output_every"] = std::to_string(cfg.output_every);
    kv["velocity.kind"] = cfg.velocity_kind;
    kv["velocity.amplitude"] = format_double(cfg.velocity_amplitude);
    kv["velocity.mode"] = std::to_string(cfg.velocity_mode);
    kv["initial.kind"] = cfg.initial_kind;
    kv["initial.mean"] = format_double(cfg.initial_mean);
    kv["initial.amplitude"] = format_double(cfg.initial_amplitude);
    kv["initial.mode"] = std::to_string(cfg.initial_mode);
    kv["initial.seed"] = std::to_string(cfg.seed);
    kv["experiment.kind"] = cfg.experiment;
    std::string deltas;
    for (const double x : cfg.deltas) deltas += (deltas.empty() ? "" : ",") + format_double(x);
    kv["experiment.deltas"] = deltas;
    std::string ladder;
    for (const double x : cfg.eps_ladder) ladder += (ladder.empty() ? "" : ",") + format_double(x);
    kv["experiment.eps_ladder"] = ladder;
    kv["experiment.perturbation_kind"] = cfg.perturbation_kind;
    kv["experiment.perturbation_amplitude"] = format_double(cfg.perturbation_amplitude);
    kv["experiment.perturbation_mode"] = std::to_string(cfg.perturbation_mode);

    std::string out;
    for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
    return out;
}

std::uint64_t config_hash(const RunConfig& cfg) {
    const std::string s = canonical_config(cfg);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace chstrip::cli
