#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

namespace sixdma {

struct PsoParams {
  int swarm_size = 12;
  int max_iters = 60;
  double inertia = 0.729;
  double cognitive = 1.49445;
  double social = 1.49445;
  double velocity_clamp = 0.25;  // fraction of the dimension range per step
  double kappa = 1e3;            // penalty coefficient used by callers
};

// Search-space description per coordinate. Periodic dimensions wrap into
// (lo, hi]; bounded ones reflect at the walls.
struct PsoDimension {
  bool periodic = false;
  double lo = 0.0;
  double hi = 1.0;
};

// Evaluates a batch of candidate points; called once per swarm iteration so
// implementations may fan the work out across threads.
using BatchObjective = std::function<std::vector<double>(const std::vector<Eigen::VectorXd>&)>;

struct PsoResult {
  Eigen::VectorXd best_point;
  double best_value = 0.0;
  std::vector<double> trace;  // global best per iteration (including init)
  bool feasible = true;       // a penalty-zero point was found
  long evaluations = 0;
};

// Inertia-weight particle swarm minimization with one warm-started particle.
// `penalty` (may be empty) classifies feasibility only; the objective is
// expected to already include any penalty term. Returns the best feasible
// point when one exists, otherwise the best penalized point with
// feasible=false. Deterministic for fixed seed.
PsoResult pso_minimize(const BatchObjective& objective,
                       const std::function<double(const Eigen::VectorXd&)>& penalty,
                       const std::vector<PsoDimension>& dims, const Eigen::VectorXd& warm_start,
                       const PsoParams& params, std::uint64_t seed);

}  // namespace sixdma
