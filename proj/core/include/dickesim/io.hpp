#pragma once

#include "dickesim/block_matrix.hpp"
#include "dickesim/observables.hpp"
#include "dickesim/trajectories.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace dickesim {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kCodeVersion = "dickesim 1.0.0";

/// Block density matrix as JSON: {"n_atoms", "blocks": {"<2j>": [[re, im], ...]}}
/// with each block flattened row-major.
nlohmann::json block_to_json(const BlockDensityMatrix& rho, const DickeLadder& ladder);
BlockDensityMatrix block_from_json(const nlohmann::json& j, const DickeLadder& ladder);

/// Flat record for one sweep row.
nlohmann::json observables_to_json(const ObservableSet& obs);

/// CSV column layout matching observables_to_csv_row.
std::string observables_csv_header();
std::string observables_to_csv_row(double omega_ratio, const ObservableSet& obs);

/// Line-delimited JSON: one "meta" line, then "sample" and "jump" lines in
/// time order.
void write_trajectory_jsonl(std::ostream& os, const TrajectoryRecord& record);

/// Run manifest: resolved config, seed range, schema and code versions.
nlohmann::json run_manifest(const nlohmann::json& resolved_config,
                            std::uint64_t seed_begin, std::uint64_t seed_end);

} // namespace dickesim
