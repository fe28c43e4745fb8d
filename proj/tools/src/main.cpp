#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nlnt/errors.hpp"
#include "nlnt/initial_data.hpp"
#include "nlnt/models.hpp"
#include "nlnt_cli/commands.hpp"
#include "nlnt_cli/config.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Flags {
  std::string config;
  std::string preset;
  std::string out;
  bool strict_cfl = false;
  int threads = 0;
  bool verbose = false;
};

nlnt::cli::RunConfig resolve(const Flags& flags, std::optional<nlnt::cli::Command> command) {
  if (flags.config.empty() == flags.preset.empty()) {
    throw nlnt::ConfigError("give exactly one of --config or --preset");
  }
  nlnt::cli::RunConfig cfg = nlnt::cli::load_config(
      flags.preset.empty() ? std::filesystem::path(flags.config)
                           : nlnt::cli::find_preset(flags.preset));
  if (command) cfg.set_command(*command);
  if (!flags.out.empty()) cfg.out_dir = flags.out;
  if (flags.strict_cfl) cfg.experiment.strict_cfl = true;
  if (flags.threads > 0) cfg.threads = flags.threads;
  if (flags.verbose) cfg.verbose = true;
  return cfg;
}

int execute(const Flags& flags, std::optional<nlnt::cli::Command> command) {
  try {
    const nlnt::cli::RunConfig cfg = resolve(flags, command);
    for (const auto& path : nlnt::cli::execute(cfg, std::cerr)) std::cout << path.string() << "\n";
    return kExitOk;
  } catch (const nlnt::ConfigError& e) {
    std::cerr << "nlnt: configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const nlnt::NumericalError& e) {
    std::cerr << "nlnt: numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const nlnt::ModelError& e) {
    std::cerr << "nlnt: numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "nlnt: error: " << e.what() << "\n";
    return kExitFailure;
  }
}

void add_run_flags(CLI::App& app, Flags& flags) {
  app.add_option("--config", flags.config, "JSON run configuration");
  app.add_option("--preset", flags.preset, "Named preset (see list-presets)");
  app.add_option("--out", flags.out, "Output directory (overrides the config)");
  app.add_flag("--strict-cfl", flags.strict_cfl, "Abort on runtime CFL violations");
  app.add_option("--threads", flags.threads, "Worker threads for convergence studies")
      ->check(CLI::PositiveNumber);
  app.add_flag("-v,--verbose", flags.verbose, "Progress on stderr");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Central schemes for nonlocal balance laws"};
  app.require_subcommand(0, 1);

  Flags flags;
  add_run_flags(app, flags);

  Flags run_flags, converge_flags, compare_flags;
  auto* run = app.add_subcommand("run", "Run each configured scheme at one level");
  add_run_flags(*run, run_flags);
  auto* converge = app.add_subcommand("converge", "Convergence study against a fine reference");
  add_run_flags(*converge, converge_flags);
  auto* compare = app.add_subcommand("compare", "All schemes at one level plus the reference");
  add_run_flags(*compare, compare_flags);
  auto* list_models = app.add_subcommand("list-models", "Models, kernels and initial data");
  auto* list_presets = app.add_subcommand("list-presets", "Presets on the search path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (*list_models) {
    for (const auto& m : nlnt::model_names()) {
      std::cout << m << " (eta " << nlnt::default_eta(m) << ", kernel "
                << nlnt::default_kernel(m) << ")\n";
    }
    std::cout << "kernels:";
    for (const auto& k : nlnt::kernel_names()) std::cout << " " << k;
    std::cout << "\ninitial data:";
    for (const auto& d : nlnt::initial_data_names()) std::cout << " " << d;
    std::cout << "\n";
    return kExitOk;
  }
  if (*list_presets) {
    for (const auto& p : nlnt::cli::preset_names()) std::cout << p << "\n";
    return kExitOk;
  }
  if (*run) return execute(run_flags, nlnt::cli::Command::Run);
  if (*converge) return execute(converge_flags, nlnt::cli::Command::Converge);
  if (*compare) return execute(compare_flags, nlnt::cli::Command::Compare);
  if (flags.config.empty() && flags.preset.empty()) {
    std::cout << app.help();
    return kExitConfig;
  }
  return execute(flags, std::nullopt);
}
