#pragma once

#include <cstdint>
#include <vector>

#include "sixdma/precoder.hpp"
#include "sixdma/pso.hpp"
#include "sixdma/sampling.hpp"

namespace sixdma {

// Frozen sample set behind every long-term rate evaluation of one cell. The
// draws are cached once; only the rotation-dependent channel factors are
// recomputed per evaluation.
struct SaaContext {
  const NetworkScenario* scenario = nullptr;
  int cell = 0;
  std::vector<int> sample_indices;
  std::uint64_t channel_seed = 0;
  SolverOptions solver;  // non-strict inner mode
  bool use_ipc = true;   // false: plain WMMSE, no victims, c = noise
  std::vector<SampleDraws> draws;

  static SaaContext make(const NetworkScenario& scenario, int cell, int num_samples,
                         std::uint64_t channel_seed, const SolverOptions& solver, bool use_ipc);
};

// Short-term problem of one cell for one cached sample under the current
// rotation and thresholds.
CellProblem cell_problem_for_sample(const SaaContext& ctx, const BsRotation& z_m,
                                    const IpcThresholds& sigma, int slot);

// Sample-average surrogate weighted rate of one cell.
double saa_cell_rate(const BsRotation& z_m, const IpcThresholds& sigma, const SaaContext& ctx);

// Per-sample values (fixed order) for diagnostics / variance reporting.
std::vector<double> saa_cell_rate_samples(const BsRotation& z_m, const IpcThresholds& sigma,
                                          const SaaContext& ctx);

Eigen::VectorXd encode_rotation(const BsRotation& z);
BsRotation decode_rotation(const Eigen::VectorXd& x);
std::vector<PsoDimension> rotation_dimensions(int num_surfaces, const GeometryConfig& cfg);

// One long-term rotation update: penalized PSO warm-started from the current
// rotation. Never returns a point whose penalized objective is worse than
// the warm start's.
BsRotation rotation_update(const BsRotation& z_current, const IpcThresholds& sigma,
                           const SaaContext& ctx, const PsoParams& params, std::uint64_t seed,
                           double* rhat_before = nullptr, double* rhat_after = nullptr);

}  // namespace sixdma
