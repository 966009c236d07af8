#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sixdma/schemes.hpp"

namespace sixdma {

// Fully resolved experiment description. Parsed from a JSON config file with
// type-checked override keys; unknown keys are rejected.
struct ExperimentConfig {
  std::string scenario_ref = "high_ici";  // builder name or file path
  std::string scenario_inline;            // inline scenario JSON (overrides ref)
  Scheme scheme = Scheme::Proposed;
  std::vector<int> seeds = {1, 2, 3};
  std::string out_dir = "results";
  bool strict = false;      // strict inner solves as well as evaluations
  bool full_scale = false;  // paper-scale budgets instead of reduced defaults
  double sigma_const = 1e-8;

  // Budgets (reduced-scale defaults; full_scale raises S/T_pso/T_max).
  int saa_samples = 20;
  int eval_samples = 20;
  int t_max = 3;
  int t_ipc = 5;
  int n_grid = 7;
  double eps_tol = 1e-4;
  double sigma_floor = 1e-9;
  int n_sw = 12;
  int t_pso = 20;
  double kappa = 1e3;
  int t_wmmse = 50;
  int t_dual = 20;
  double bisect_tol = 1e-9;
  double dual_step0 = 1.0;
  double feas_rel_tol = 1e-2;
  double inertia = 0.729;
  double cognitive = 1.49445;
  double social = 1.49445;
  double velocity_clamp = 0.25;
  int threads = 0;

  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_file(const std::string& path);
  std::string to_json() const;
  std::uint64_t hash() const;

  NetworkScenario resolve_scenario() const;
  SolverOptions solver_options() const;
  PsoParams pso_params() const;
  AoOptions ao_options() const;
  CentralizedOptions central_options() const;
  SchemeOptions scheme_options() const;
};

struct RunPaths {
  std::string dir;
  std::string config_json;
  std::string trace_jsonl;
  std::string summary_csv;
  std::string timings_csv;
  std::string checkpoint_json;
  std::string report_json;
};

// Runs one (config, seed) experiment: executes the scheme, persists the
// config snapshot, trace, summary, timings and invariant report. AO schemes
// checkpoint after every iteration and resume from a matching checkpoint.
RunPaths run_experiment(const ExperimentConfig& config, int seed);
std::vector<RunPaths> run_experiment_all_seeds(const ExperimentConfig& config);

struct SweepPoint {
  double sigma_const = 0.0;
  int seed = 0;
  double utility = 0.0;
  long messages = 0;
};
// Fixed-threshold sweep: rotations optimized, coordination disabled.
std::vector<SweepPoint> sweep_fixed_ipc(const ExperimentConfig& config,
                                        const std::vector<double>& sigma_values);

struct ScalabilityPoint {
  int num_cells = 0;
  std::string scheme;
  int seed = 0;
  double value = 0.0;                 // final network weighted sum-rate (eval set)
  double per_bs_iter_median_s = 0.0;  // distributed only
  double central_eval_median_s = 0.0; // centralized only
};
// Proposed vs centralized on the triangular lattices, with timing medians.
std::vector<ScalabilityPoint> scalability_run(const ExperimentConfig& config,
                                              const std::vector<int>& cell_counts);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};
// Fast invariant suite over randomized inputs plus a micro end-to-end run.
std::vector<CheckResult> self_test();

// Serialization helpers shared with tests.
std::string summary_csv_text(const std::vector<SummaryRow>& rows, int num_cells);
std::string trace_jsonl_text(const CoordinationTrace& trace);

// Invariant report over a finished AO trace (the machine-readable acceptance
// report written next to each run).
std::vector<CheckResult> validate_trace(const NetworkScenario& scenario,
                                        const CoordinationTrace& trace,
                                        const IpcThresholds& final_sigma, double sigma_initial,
                                        double eps_tol, double sigma_floor);

}  // namespace sixdma
