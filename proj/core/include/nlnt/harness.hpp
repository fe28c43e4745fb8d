#pragma once

#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nlnt/csv.hpp"
#include "nlnt/grid.hpp"
#include "nlnt/models.hpp"
#include "nlnt/schemes.hpp"
#include "nlnt/time_control.hpp"

namespace nlnt {

/// A family of runs on the grids dx_n = base_dx 2^-n over one domain.
struct Experiment {
  std::string label;
  ModelParams model;
  std::string initial_data;                      // registry name, or
  std::vector<std::string> initial_expressions;  // one per species
  std::optional<double> x_left;                  // default: from the registry entry
  std::optional<double> x_right;
  double t_final = 0.0;
  Boundary bc = Boundary::Periodic;
  std::vector<SchemeConfig> schemes;
  std::vector<int> levels{0, 1, 2, 3, 4, 5};
  int reference_level = 9;
  SchemeConfig reference_scheme{SchemeKind::NT, SlopeVariant::V2, 1.0, {}};
  double base_dx = 1.0 / 20.0;
  TimeController time;
  int cfl_check_interval = 10;
  bool strict_cfl = false;
  std::vector<double> entropy_zetas;  // NT runs of scalar models only

  /// Throws ConfigError/InputDataError on inconsistent settings, including
  /// kernel supports that are not whole multiples of every grid spacing.
  void validate() const;

  double domain_left() const;
  double domain_right() const;
  int cells(int level) const;
  Grid grid(int level) const;
  int species() const;
  InitialProfile profile() const;
  ModelDef build_model() const;
  TimeController controller() const;
};

/// Flux and source Lipschitz bounds sampled over the range of the initial
/// profile, widened to the model's invariant interval when it declares one.
/// Independent of the level, so every level uses the same lambda.
struct LipschitzBounds {
  double flux = 0.0;
  double source = 0.0;
  StateBox box;
};
LipschitzBounds experiment_lipschitz(const Experiment& exp);

struct MonitorRecord {
  double time = 0.0;
  std::vector<double> mass;
  std::vector<double> min;
  std::vector<double> max;
  std::vector<double> tv;
  double entropy_residual = std::numeric_limits<double>::quiet_NaN();
};

class MonitorLog {
 public:
  /// Throws ContractError unless times increase strictly.
  void append(MonitorRecord record);
  const std::vector<MonitorRecord>& records() const { return records_; }
  bool empty() const { return records_.empty(); }

  /// max_t |mass_k(t) - mass_k(0)| / max(|mass_k(0)|, tiny), over species.
  double max_relative_mass_drift() const;
  double min_value() const;
  double max_abs_value() const;
  double max_entropy_residual() const;
  /// Smallest C with max|rho|(t) <= max|rho|(0) exp(C t) on the log.
  double linf_growth_exponent() const;

  CsvTable csv(const std::vector<std::string>& species_names) const;

 private:
  std::vector<MonitorRecord> records_;
};

MonitorRecord monitor_snapshot(const SystemState& state, const Grid& grid, Boundary bc);

using WarningSink = std::function<void(const std::string&)>;

struct RunOptions {
  bool monitor = true;
  int monitor_interval = 1;
  WarningSink warn;  // default: stderr
};

struct RunResult {
  SystemState state;
  MonitorLog log;
  int steps = 0;
  double dt = 0.0;  // initial step; adaptive runs may shrink it
  double lambda = 0.0;
  double min_dt = 0.0;
  double lip_flux = 0.0;
  double lip_source = 0.0;
  int cfl_warnings = 0;
  double max_runtime_cfl = 0.0;  // max lambda * runtime flux bound seen
  double seconds = 0.0;
};

/// Steps from the initial averages to t_final. Throws NumericalError on
/// non-finite values (with the step index) and on CFL violations when
/// strict_cfl is set.
RunResult run_simulation(const Experiment& exp, const SchemeConfig& scheme, int level,
                         const RunOptions& options = {});

/// Mean of each block of fine cells covering one coarse cell.
SystemState restrict_to_coarse(const SystemState& fine, int coarse_cells);

/// dx sum_j sum_k |a - b|.
double l1_error(const SystemState& a, const SystemState& b, const Grid& grid);

/// log2(coarse / fine) for grids whose spacing halves.
double observed_rate(double coarse_error, double fine_error);

struct ConvergenceRow {
  std::string scheme;
  int level = 0;
  double dx = 0.0;
  double error = 0.0;
  double rate = std::numeric_limits<double>::quiet_NaN();  // vs previous level
  double lambda = 0.0;
  double seconds = 0.0;
};

struct ConvergenceReport {
  std::string experiment;
  std::vector<ConvergenceRow> rows;
  std::string reference_scheme;
  int reference_level = 0;
  double lambda = 0.0;
  std::string error_norm = "L1, summed over species";

  std::vector<ConvergenceRow> scheme_rows(const std::string& scheme) const;
  const ConvergenceRow& row(const std::string& scheme, int level) const;
  /// Columns scheme, n, dx, l1_error, rate; `prefix` is prepended to the
  /// scheme label (e.g. "constant:").
  CsvTable csv(const std::string& prefix = "") const;
};

struct StudyOptions {
  int threads = 1;
  std::filesystem::path cache_dir;  // empty: no reference cache
  RunOptions run;
  std::function<void(const std::string&)> progress;
};

/// Runs the reference once, then every (scheme, level) pair, and reports
/// L1 errors against the restricted reference with log2 rates between
/// adjacent levels.
ConvergenceReport convergence_study(const Experiment& exp, const StudyOptions& options = {});

/// Reference solution at exp.reference_level, read from / written to the
/// cache directory when one is given.
SystemState reference_solution(const Experiment& exp, const StudyOptions& options = {});

/// Stable key of everything that determines the reference solution.
std::string reference_cache_key(const Experiment& exp);

struct Comparison {
  Grid grid;
  std::vector<std::string> schemes;
  std::vector<SystemState> solutions;
  SystemState reference;  // restricted to `grid`
  std::vector<double> errors;
};

/// All schemes at one level plus the restricted reference.
Comparison compare_schemes(const Experiment& exp, int level, const StudyOptions& options = {});

}  // namespace nlnt
