#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>

#include "lrmf/experiments.hpp"

namespace {

int exit_code_for(const std::string& error_class) {
  if (error_class == "config_invalid") return 2;
  if (error_class == "io_error") return 3;
  if (error_class == "empty_window") return 4;
  if (error_class == "dimension_mismatch") return 5;
  if (error_class == "invalid_argument") return 6;
  if (error_class == "numerical") return 7;
  return 1;
}

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> n_override;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::string> out_override;
  bool plots = false;
};

void add_common(CLI::App* cmd, CommonOptions& options) {
  cmd->add_option("--config", options.config_path, "path to a JSON config")
      ->required();
  cmd->add_option("--n", options.n_override, "replace the n list with one value");
  cmd->add_option("--seed", options.seed_override, "replace the seed list with one value");
  cmd->add_option("--out", options.out_override, "output directory");
  cmd->add_flag("--plots", options.plots, "also write plot files");
}

lrmf::ExperimentConfig load_config(const CommonOptions& options) {
  lrmf::ExperimentConfig config =
      lrmf::ExperimentConfig::from_json_file(options.config_path);
  if (options.n_override) config.n_list = {*options.n_override};
  if (options.seed_override) config.seeds = {*options.seed_override};
  if (options.out_override) config.out_dir = *options.out_override;
  if (options.plots) config.plots = true;
  return config;
}

void run_simulate(const CommonOptions& options) {
  lrmf::ExperimentConfig config = load_config(options);
  const lrmf::MatrixFunctionSpec truth = config.build_truth();
  const lrmf::Dataset data =
      lrmf::generate_dataset(truth, config.n_list.front(), config.noise_level,
                             config.seeds.front(), config.noise());
  const std::filesystem::path dir(lrmf::resolve_out_dir(config));
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "dataset.csv").string();
  lrmf::save_dataset(data, path);
  lrmf::write_manifest(config, (dir / "manifest.txt").string());
  std::cout << "wrote " << data.size() << " observations to " << path << "\n";
}

void run_with_kind(const CommonOptions& options,
                   std::optional<lrmf::ExperimentKind> forced_kind) {
  lrmf::ExperimentConfig config = load_config(options);
  if (forced_kind) config.kind = *forced_kind;
  lrmf::run_experiment(config);
  std::cout << "experiment finished; outputs in " << config.out_dir << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"estimation of low-rank matrix-valued functions from trace regression samples"};
  app.require_subcommand(1);

  CommonOptions simulate_opts, point_opts, global_opts, kernel_opts,
      select_opts, sweep_opts;

  add_common(app.add_subcommand("simulate", "generate a dataset CSV"), simulate_opts);
  add_common(app.add_subcommand("fit-point", "one local fit at t0"), point_opts);
  add_common(app.add_subcommand("fit-global", "tiled global fit with integrated risk"),
             global_opts);
  add_common(app.add_subcommand("fit-kernel", "kernel estimate with sup-norm risk"),
             kernel_opts);
  add_common(app.add_subcommand("select", "bandwidth/degree selection by data splitting"),
             select_opts);
  add_common(app.add_subcommand("sweep", "risk sweep over the configured n list"),
             sweep_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("simulate")) run_simulate(simulate_opts);
    else if (app.got_subcommand("fit-point"))
      run_with_kind(point_opts, lrmf::ExperimentKind::SingleFit);
    else if (app.got_subcommand("fit-global"))
      run_with_kind(global_opts, lrmf::ExperimentKind::IntegratedSweep);
    else if (app.got_subcommand("fit-kernel"))
      run_with_kind(kernel_opts, lrmf::ExperimentKind::SupnormSweep);
    else if (app.got_subcommand("select"))
      run_with_kind(select_opts, lrmf::ExperimentKind::ModelSelection);
    else if (app.got_subcommand("sweep"))
      run_with_kind(sweep_opts, std::nullopt);
  } catch (const lrmf::Error& error) {
    std::cerr << "error[" << error.error_class() << "]: " << error.what() << "\n";
    return exit_code_for(error.error_class());
  } catch (const std::exception& error) {
    std::cerr << "error[internal]: " << error.what() << "\n";
    return 1;
  }
  return 0;
}
