#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "chstrip/diagnostics.hpp"
#include "chstrip/spectral.hpp"
#include "chstrip/trajectory.hpp"

namespace chstrip::cli {

/// All writers emit a first line "# config=<16 hex digits>" followed by a
/// column header; doubles are rendered with %.17g, so identical runs produce
/// identical bytes.
void write_trajectory_csv(const std::string& path, const dynamics::TrajectoryRecord& rec,
                          std::uint64_t hash);
void write_ledger_csv(const std::string& path, const dynamics::TrajectoryRecord& rec,
                      std::uint64_t hash);
void write_dependence_csv(const std::string& path, const diagnostics::DependenceResult& res,
                          std::uint64_t hash);
void write_eps_study_csv(const std::string& path, const diagnostics::EpsResult& res,
                         std::uint64_t hash);
void write_spectrum_csv(const std::string& path, const spectral::EigenBasis& basis,
                        std::uint64_t hash);
void write_summary(const std::string& path, const std::map<std::string, std::string>& kv,
                   std::uint64_t hash);

std::string hash_hex(std::uint64_t hash);

}  // namespace chstrip::cli
