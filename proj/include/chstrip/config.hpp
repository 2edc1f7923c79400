#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace chstrip::cli {

/// Flat key=value run description. Unknown keys, duplicate keys and
/// malformed values are rejected during parsing; range checks live in
/// validate_config.
struct RunConfig {
    // mesh.*
    int nx = 32;
    int ny = 33;
    double lx = 1.0;
    double ly = 1.0;
    // potential.*
    std::string bulk = "regular";
    std::string boundary = "regular";
    double eps = 0.1;
    double eta = 1.0;
    double c = 1.5;
    // dynamics.*
    double tau_bulk = 1.0;
    double tau_bdry = 1.0;
    double kappa = 0.0;
    int n_modes = 64;
    double dt = 1e-3;
    double t_end = 1.0;
    std::string stepper = "backward_euler";
    double newton_tol = 1e-11;
    int output_every = 1;
    // velocity.*
    std::string velocity_kind = "none";
    double velocity_amplitude = 0.0;
    int velocity_mode = 1;
    // initial.*
    std::string initial_kind = "cosine";
    double initial_mean = 0.0;
    double initial_amplitude = 0.25;
    int initial_mode = 1;
    std::uint64_t seed = 0;
    // experiment.*
    std::string experiment = "none";
    std::vector<double> deltas = {0.1, 0.05, 0.025};
    std::vector<double> eps_ladder;  // empty: eps / 2^k, k = 0..3
    std::string perturbation_kind = "shear";
    double perturbation_amplitude = 1.0;
    int perturbation_mode = 1;  // stream perturbations only
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// Static range and enumeration checks; throws ConfigError.
void validate_config(const RunConfig& cfg);

/// Sorted key=value rendering with %.17g doubles; the determinism anchor.
std::string canonical_config(const RunConfig& cfg);

/// 64-bit FNV-1a of the canonical rendering.
std::uint64_t config_hash(const RunConfig& cfg);

std::string format_double(double v);  // %.17g

}  // namespace chstrip::cli
