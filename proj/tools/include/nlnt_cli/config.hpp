#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "nlnt/harness.hpp"

namespace nlnt::cli {

enum class Command { Run, Converge, Compare };

Command parse_command(std::string_view name);
std::string to_string(Command command);

/// A validated run description: the experiment plus what to do with it and
/// where to put the results.
struct RunConfig {
  Command command = Command::Run;
  Experiment experiment;
  // Kernel sweep for converge: one study per entry, CSV labels prefixed
  // "<kernel>:". Holds the single model kernel otherwise.
  std::vector<std::string> kernels;
  std::vector<int> levels;  // converge
  int level = 0;             // run and compare
  std::filesystem::path out_dir = "out";
  std::filesystem::path cache_dir;  // empty: <out_dir>/reference-cache
  bool write_monitor = true;
  int monitor_interval = 1;
  int threads = 1;
  bool verbose = false;

  std::filesystem::path reference_cache() const;
  /// Switches the command; run and compare narrow the levels to `level`
  /// and reject kernel sweeps.
  void set_command(Command c);
  /// The experiment for one entry of `kernels`.
  Experiment experiment_for_kernel(const std::string& kernel) const;
};

/// Parses and validates a JSON config. Unknown keys, wrong types and
/// out-of-range values raise ConfigError naming the key path (e.g.
/// "$.cfl.safety"); kernel/grid ratio problems name the level and dx.
RunConfig parse_config(std::string_view json_text, std::string_view origin = "config");
RunConfig load_config(const std::filesystem::path& path);

/// Directories searched for presets, in order: $NLNT_PRESET_DIR, the
/// source tree, the install prefix.
std::vector<std::filesystem::path> preset_search_path();
std::vector<std::string> preset_names();
std::filesystem::path find_preset(std::string_view name);

}  // namespace nlnt::cli
