#pragma once

#include <cstdint>
#include <vector>

#include "sixdma/precoder.hpp"
#include "sixdma/pso.hpp"
#include "sixdma/sampling.hpp"

namespace sixdma {

struct CentralizedOptions {
  int saa_samples = 20;
  PsoParams pso;  // swarm size / iteration budget of the offline search
  double kappa = 1e3;
  SolverOptions solver;
};

// Per-sample inner value: network WMMSE weighted sum-rate under rotations z.
double sample_value(const NetworkScenario& scenario, const std::vector<BsRotation>& z,
                    const SampleDraws& draws, const SolverOptions& solver);

// Mean of sample_value over a frozen sample list.
double saa_objective(const NetworkScenario& scenario, const std::vector<BsRotation>& z,
                     const std::vector<SampleDraws>& draws, const SolverOptions& solver);

struct CentralizedResult {
  std::vector<BsRotation> rotations;
  double jhat = 0.0;           // SAA objective of the returned rotations
  std::vector<double> trace;   // best objective value per swarm iteration
  long evaluations = 0;        // number of SAA objective evaluations
  std::vector<double> eval_seconds;  // per-evaluation wall time (task-summed)
};

// Penalized global PSO over all 2BM rotation angles, warm-started from z0.
// A zero iteration budget degenerates to evaluating z0 (the fixed-rotation
// centralized benchmark).
CentralizedResult centralized_search(const NetworkScenario& scenario,
                                     const std::vector<BsRotation>& z0,
                                     const CentralizedOptions& opts, std::uint64_t seed);

}  // namespace sixdma
