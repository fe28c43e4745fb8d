#pragma once

#include <filesystem>
#include <ostream>
#include <vector>

#include "nlnt/csv.hpp"
#include "nlnt/harness.hpp"
#include "nlnt_cli/config.hpp"

namespace nlnt::cli {

/// Columns x, one per species, then model extras (w for GARZ).
CsvTable snapshot_table(const ModelDef& model, const Grid& grid, const SystemState& state);

/// Columns x, then "<scheme>:<column>" for every scheme and snapshot
/// column, then "reference:<column>".
CsvTable comparison_table(const ModelDef& model, const Comparison& comparison);

/// Each command writes its artifacts atomically below cfg.out_dir and
/// returns their paths; progress and warnings go to `log`.
std::vector<std::filesystem::path> cmd_run(const RunConfig& cfg, std::ostream& log);
std::vector<std::filesystem::path> cmd_converge(const RunConfig& cfg, std::ostream& log);
std::vector<std::filesystem::path> cmd_compare(const RunConfig& cfg, std::ostream& log);

std::vector<std::filesystem::path> execute(const RunConfig& cfg, std::ostream& log);

}  // namespace nlnt::cli
