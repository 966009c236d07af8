// Command-line front end: experiment runner, fixed-IPC sweep, scalability
// study, config validation and the built-in invariant suite.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sixdma/harness.hpp"

namespace {

sixdma::ExperimentConfig load_config(const std::string& config_path,
                                     const std::vector<int>& seeds, const std::string& out_dir,
                                     bool strict, bool full_scale, int threads) {
  sixdma::ExperimentConfig cfg = config_path.empty()
                                     ? sixdma::ExperimentConfig{}
                                     : sixdma::ExperimentConfig::from_file(config_path);
  if (!seeds.empty()) cfg.seeds = seeds;
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (strict) cfg.strict = true;
  if (full_scale) {
    cfg.full_scale = true;
    cfg.saa_samples = 100;
    cfg.eval_samples = 100;
    cfg.t_pso = 60;
    cfg.t_max = 5;
  }
  if (threads > 0) cfg.threads = threads;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-cell 6DMA network optimization simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir, scheme, scenario;
  std::vector<int> seeds;
  bool strict = false, full_scale = false;
  int threads = 0;
  std::vector<double> sigma_list = {1e-6, 1e-7, 1e-8, 1e-9, 1e-10};
  std::vector<int> cell_counts = {3, 6, 10, 15};

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "experiment config JSON");
    cmd->add_option("--seed", seeds, "seed (repeatable; overrides config seeds)");
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_flag("--strict", strict, "strict IPC feasibility in inner solves too");
    cmd->add_flag("--full-scale", full_scale, "paper-scale budgets (slow)");
    cmd->add_option("--threads", threads, "worker threads (default: hardware)");
  };

  CLI::App* run = app.add_subcommand("run", "run one experiment for all seeds");
  add_common(run);
  run->add_option("--scheme", scheme, "scheme override (proposed, rotation-only, ...)");
  run->add_option("--scenario", scenario, "scenario override (name or file)");

  CLI::App* sweep = app.add_subcommand("sweep-fixed-ipc", "fixed-threshold sweep");
  add_common(sweep);
  sweep->add_option("--sigma", sigma_list, "threshold values (repeatable)");

  CLI::App* scal = app.add_subcommand("scalability", "lattice scalability study");
  add_common(scal);
  scal->add_option("--cells", cell_counts, "lattice sizes (subset of {3,6,10,15})");

  CLI::App* validate = app.add_subcommand("validate-config", "validate a config file");
  validate->add_option("--config", config_path, "experiment config JSON")->required();

  CLI::App* selftest = app.add_subcommand("self-test", "run the invariant suite");
  selftest->add_option("--threads", threads, "worker threads");

  CLI::App* writes = app.add_subcommand("write-scenarios", "emit the bundled scenario fixtures");
  std::string fixture_dir = "data/scenarios";
  writes->add_option("--dir", fixture_dir, "target directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(validate)) {
      const auto cfg = sixdma::ExperimentConfig::from_file(config_path);
      cfg.resolve_scenario();
      std::cout << "config ok\n" << cfg.to_json() << "\n";
      return 0;
    }
    if (app.got_subcommand(selftest)) {
      sixdma::set_parallel_threads(threads);
      const auto checks = sixdma::self_test();
      bool all = true;
      for (const auto& c : checks) {
        std::printf("%-45s %s %s\n", c.name.c_str(), c.pass ? "PASS" : "FAIL", c.detail.c_str());
        all = all && c.pass;
      }
      return all ? 0 : 1;
    }
    if (app.got_subcommand(writes)) {
      namespace fs = std::filesystem;
      fs::create_directories(fixture_dir);
      for (const char* name : {"high_ici", "medium_ici"}) {
        sixdma::build_setup(name).save(fixture_dir + "/" + name + ".json");
      }
      for (int m : {3, 6, 10, 15}) {
        sixdma::build_lattice(m).save(fixture_dir + "/lattice_" + std::to_string(m) + ".json");
      }
      std::cout << "scenario fixtures written to " << fixture_dir << "\n";
      return 0;
    }

    sixdma::ExperimentConfig cfg =
        load_config(config_path, seeds, out_dir, strict, full_scale, threads);

    if (app.got_subcommand(run)) {
      if (!scheme.empty()) cfg.scheme = sixdma::scheme_from_name(scheme);
      if (!scenario.empty()) cfg.scenario_ref = scenario;
      for (const auto& paths : sixdma::run_experiment_all_seeds(cfg)) {
        std::cout << "wrote " << paths.dir << "\n";
      }
    } else if (app.got_subcommand(sweep)) {
      for (const auto& p : sixdma::sweep_fixed_ipc(cfg, sigma_list)) {
        std::printf("sigma=%.3e seed=%d utility=%.4f messages=%ld\n", p.sigma_const, p.seed,
                    p.utility, p.messages);
      }
    } else if (app.got_subcommand(scal)) {
      for (const auto& p : sixdma::scalability_run(cfg, cell_counts)) {
        std::printf("M=%-3d %-12s seed=%d value=%.4f per_bs_iter=%.3fs central_eval=%.4fs\n",
                    p.num_cells, p.scheme.c_str(), p.seed, p.value, p.per_bs_iter_median_s,
                    p.central_eval_median_s);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
