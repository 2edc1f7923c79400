#include "chstrip/io.hpp"

#include <cstdio>
#include <fstream>

#include "chstrip/config.hpp"
#include "chstrip/errors.hpp"

namespace chstrip::cli {

std::string hash_hex(std::uint64_t hash) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

namespace {

std::ofstream open_csv(const std::string& path, std::uint64_t hash) {
    std::ofstream out(path, std::ios::binary);  // fixed newlines on every platform
    if (!out) throw NumericalError("cannot open output file: " + path);
    out << "# config=" << hash_hex(hash) << "\n";
    return out;
}

}  // namespace

void write_trajectory_csv(const std::string& path, const dynamics::TrajectoryRecord& rec,
                          std::uint64_t hash) {
    std::ofstream out = open_csv(path, hash);
    const int m = rec.size() ? static_cast<int>(rec.rho.front().size()) : 0;
    out << "t";
    for (int j = 1; j <= m; ++j) out << ",rho_" << j;
    for (int j = 1; j <= m; ++j) out << ",mu_" << j;
    out << ",mass,energy,min_rho,max_rho\n";
    for (std::size_t k = 0; k < rec.size(); ++k) {
        out << format_double(rec.times[k]);
        for (int j = 0; j < m; ++j) out << "," << format_double(rec.rho[k](j));
        for (int j = 0; j < m; ++j) out << "," << format_double(rec.mu[k](j));
        out << "," << format_double(rec.mass[k]) << "," << format_double(rec.energy[k])
            << "," << format_double(rec.min_value[k]) << ","
            << format_double(rec.max_value[k]) << "\n";
    }
}

void write_ledger_csv(const std::string& path, const dynamics::TrajectoryRecord& rec,
                      std::uint64_t hash) {
    std::ofstream out = open_csv(path, hash);
    out << "t,energy,dissipation,work,residual\n";
    for (const auto& row : diagnostics::energy_ledger(rec)) {
        out << format_double(row.t) << "," << format_double(row.energy) << ","
            << format_double(row.dissipation) << "," << format_double(row.work) << ","
            << format_double(row.residual) << "\n";
    }
}

void write_dependence_csv(const std::string& path, const diagnostics::DependenceResult& res,
                          std::uint64_t hash) {
    std::ofstream out = open_csv(path, hash);
    out << "delta,lhs,rhs,ratio\n";
    for (std::size_t k = 0; k < res.delta.size(); ++k) {
        out << format_double(res.delta[k]) << "," << format_double(res.lhs[k]) << ","
            << format_double(res.rhs[k]) << "," << format_double(res.ratio[k]) << "\n";
    }
}

void write_eps_study_csv(const std::string& path, const diagnostics::EpsResult& res,
                         std::uint64_t hash) {
    std::ofstream out = open_csv(path, hash);
    out << "eps,cauchy_diff,beta_norm\n";
    for (std::size_t k = 0; k < res.eps.size(); ++k) {
        out << format_double(res.eps[k]) << "," << format_double(res.cauchy_diff[k]) << ","
            << format_double(res.beta_norm[k]) << "\n";
    }
}

void write_spectrum_csv(const std::string& path, const spectral::EigenBasis& basis,
                        std::uint64_t hash) {
    std::ofstream out = open_csv(path, hash);
    out << "index,eigenvalue\n";
    for (int j = 0; j < basis.n_modes(); ++j)
        out << (j + 1) << "," << format_double(basis.eigenvalues(j)) << "\n";
}

void write_summary(const std::string& path, const std::map<std::string, std::string>& kv,
                   std::uint64_t hash) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw NumericalError("cannot open output file: " + path);
    out << "config=" << hash_hex(hash) << "\n";
    for (const auto& [k, v] : kv) out << k << "=" << v << "\n";
}

}  // namespace chstrip::cli
