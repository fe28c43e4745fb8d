#include "nlnt_cli/commands.hpp"

#include <mutex>

#include <json.hpp>

#include "nlnt/models.hpp"

namespace nlnt::cli {

namespace {

std::vector<std::string> snapshot_columns(const ModelDef& model, const SystemState& state) {
  std::vector<std::string> cols = model.species_names;
  for (auto& name : output_columns(model, state).names) cols.push_back(std::move(name));
  return cols;
}

std::vector<Field> snapshot_values(const ModelDef& model, const SystemState& state) {
  std::vector<Field> vals = state.values;
  for (auto& v : output_columns(model, state).values) vals.push_back(std::move(v));
  return vals;
}

// Study workers report from several threads.
std::function<void(const std::string&)> locked_sink(std::ostream& log, std::string prefix) {
  static std::mutex mutex;
  return [&log, prefix = std::move(prefix)](const std::string& msg) {
    const std::lock_guard<std::mutex> lock(mutex);
    log << prefix << msg << "\n";
  };
}

RunOptions run_options(const RunConfig& cfg, std::ostream& log) {
  RunOptions o;
  o.monitor = cfg.write_monitor;
  o.monitor_interval = cfg.monitor_interval;
  o.warn = locked_sink(log, "warning: ");
  return o;
}

StudyOptions study_options(const RunConfig& cfg, std::ostream& log) {
  StudyOptions o;
  o.threads = cfg.threads;
  o.cache_dir = cfg.reference_cache();
  o.run = run_options(cfg, log);
  o.run.monitor = false;
  if (cfg.verbose) o.progress = locked_sink(log, "");
  return o;
}

std::string stem(const Experiment& exp, const std::string& what) { return exp.label + "_" + what; }

}  // namespace

CsvTable snapshot_table(const ModelDef& model, const Grid& grid, const SystemState& state) {
  CsvTable t;
  t.header = {"x"};
  for (auto& c : snapshot_columns(model, state)) t.header.push_back(std::move(c));
  const std::vector<Field> vals = snapshot_values(model, state);
  for (int j = 0; j < grid.cells(); ++j) {
    std::vector<std::string> row{format_double(grid.center(j))};
    for (const auto& v : vals) row.push_back(format_double(v[static_cast<std::size_t>(j)]));
    t.add_row(std::move(row));
  }
  return t;
}

CsvTable comparison_table(const ModelDef& model, const Comparison& cmp) {
  CsvTable t;
  t.header = {"x"};
  const std::vector<std::string> cols = snapshot_columns(model, cmp.reference);
  std::vector<std::vector<Field>> blocks;
  for (std::size_t s = 0; s < cmp.schemes.size(); ++s) {
    for (const auto& c : cols) t.header.push_back(cmp.schemes[s] + ":" + c);
    blocks.push_back(snapshot_values(model, cmp.solutions[s]));
  }
  for (const auto& c : cols) t.header.push_back("reference:" + c);
  blocks.push_back(snapshot_values(model, cmp.reference));
  for (int j = 0; j < cmp.grid.cells(); ++j) {
    std::vector<std::string> row{format_double(cmp.grid.center(j))};
    for (const auto& block : blocks) {
      for (const auto& v : block) row.push_back(format_double(v[static_cast<std::size_t>(j)]));
    }
    t.add_row(std::move(row));
  }
  return t;
}

std::vector<std::filesystem::path> cmd_run(const RunConfig& cfg, std::ostream& log) {
  const Experiment& exp = cfg.experiment;
  const ModelDef model = exp.build_model();
  const Grid grid = exp.grid(cfg.level);
  std::vector<std::filesystem::path> written;
  for (const SchemeConfig& scheme : exp.schemes) {
    const std::string label = scheme_label(scheme);
    if (cfg.verbose) log << "run " << label << " n=" << cfg.level << "\n";
    const RunResult res = run_simulation(exp, scheme, cfg.level, run_options(cfg, log));
    const std::string base = stem(exp, label + "_n" + std::to_string(cfg.level));
    const auto snap = cfg.out_dir / (base + ".csv");
    write_file_atomic(snap, snapshot_table(model, grid, res.state).str());
    written.push_back(snap);
    if (cfg.write_monitor) {
      const auto mon = cfg.out_dir / (base + "_monitor.csv");
      write_file_atomic(mon, res.log.csv(model.species_names).str());
      written.push_back(mon);
    }
    if (cfg.verbose) {
      log << "  steps=" << res.steps << " lambda=" << format_double(res.lambda)
          << " L_F=" << format_double(res.lip_flux) << " cfl_warnings=" << res.cfl_warnings
          << "\n";
    }
  }
  return written;
}

std::vector<std::filesystem::path> cmd_converge(const RunConfig& cfg, std::ostream& log) {
  const StudyOptions opts = study_options(cfg, log);
  CsvTable all;
  nlohmann::json meta;
  meta["experiment"] = cfg.experiment.label;
  meta["studies"] = nlohmann::json::array();
  const bool sweep = cfg.kernels.size() > 1;
  for (const auto& kernel : cfg.kernels) {
    const Experiment exp = cfg.experiment_for_kernel(kernel);
    const ConvergenceReport rep = convergence_study(exp, opts);
    const CsvTable t = rep.csv(sweep ? kernel + ":" : "");
    if (all.header.empty()) all.header = t.header;
    for (const auto& row : t.rows) all.add_row(row);
    const LipschitzBounds lip = experiment_lipschitz(exp);
    meta["studies"].push_back({{"kernel", kernel},
                               {"reference_scheme", rep.reference_scheme},
                               {"reference_level", rep.reference_level},
                               {"lambda", rep.lambda},
                               {"lip_flux", lip.flux},
                               {"error_norm", rep.error_norm}});
  }
  const auto csv = cfg.out_dir / (cfg.experiment.label + "_convergence.csv");
  const auto json = cfg.out_dir / (cfg.experiment.label + "_convergence.json");
  write_file_atomic(csv, all.str());
  write_file_atomic(json, meta.dump(2) + "\n");
  return {csv, json};
}

std::vector<std::filesystem::path> cmd_compare(const RunConfig& cfg, std::ostream& log) {
  const Experiment& exp = cfg.experiment;
  const Comparison cmp = compare_schemes(exp, cfg.level, study_options(cfg, log));
  const ModelDef model = exp.build_model();
  const auto overlay = cfg.out_dir / stem(exp, "compare_n" + std::to_string(cfg.level) + ".csv");
  write_file_atomic(overlay, comparison_table(model, cmp).str());

  CsvTable errors;
  errors.header = {"scheme", "n", "dx", "l1_error"};
  for (std::size_t s = 0; s < cmp.schemes.size(); ++s) {
    errors.add_row({cmp.schemes[s], std::to_string(cfg.level), format_double(cmp.grid.dx()),
                    format_double(cmp.errors[s])});
  }
  const auto err = cfg.out_dir / stem(exp, "compare_n" + std::to_string(cfg.level) + "_errors.csv");
  write_file_atomic(err, errors.str());
  return {overlay, err};
}

std::vector<std::filesystem::path> execute(const RunConfig& cfg, std::ostream& log) {
  switch (cfg.command) {
    case Command::Run:
      return cmd_run(cfg, log);
    case Command::Converge:
      return cmd_converge(cfg, log);
    case Command::Compare:
      return cmd_compare(cfg, log);
  }
  return {};
}

}  // namespace nlnt::cli
