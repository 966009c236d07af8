#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "sixdma/longterm.hpp"
#include "sixdma/precoder.hpp"
#include "sixdma/scenario.hpp"

namespace sixdma {

// Inter-BS signaling ledger. Only scalar threshold candidates, scalar
// utilities and decisions ever cross the bus.
struct BusMessage {
  enum class Kind { CandidateThreshold, UtilityScalar, Decision };
  int t = 0;
  int tau = 0;
  int from = 0;
  int to = 0;
  Kind kind = Kind::CandidateThreshold;
  int scalars = 1;
};

class MessageBus {
 public:
  void send(int t, int tau, int from, int to, BusMessage::Kind kind, int scalars = 1) {
    ledger_.push_back({t, tau, from, to, kind, scalars});
  }
  const std::vector<BusMessage>& ledger() const { return ledger_; }
  long total_messages() const { return static_cast<long>(ledger_.size()); }
  long total_scalars() const;

 private:
  std::vector<BusMessage> ledger_;
};

// Seeded random maximal matching: shuffle the edge list, greedily keep
// vertex-disjoint edges. Output is sorted for deterministic processing.
std::vector<std::pair<int, int>> random_maximal_matching(const AdjacencyGraph& graph,
                                                         std::uint64_t seed);

// Log-spaced candidate thresholds around sigma_cur: current value plus a
// geometric grid between max(0.1 sigma, floor) and max(10 sigma, lb),
// deduplicated (1e-12 relative) and ascending.
std::vector<double> ipc_candidates(double sigma_cur, int n_grid, double sigma_floor);

struct PairwiseRecord {
  int t = 0, tau = 0, m = 0, n = 0;
  std::vector<double> stage1_candidates, stage1_utilities;
  std::vector<double> stage2_candidates, stage2_utilities;
  double phi_cur = 0.0, phi_new = 0.0;
  bool accepted = false;
  double sigma_mn_before = 0.0, sigma_nm_before = 0.0;
  double sigma_mn_after = 0.0, sigma_nm_after = 0.0;
  double wall_seconds = 0.0;  // both endpoints combined
};

// Two-stage one-dimensional grid search for one matched pair. Updates the
// two directed thresholds in `sigma` on acceptance; all other entries stay
// untouched.
PairwiseRecord pairwise_search(int m, int n, IpcThresholds& sigma,
                               const std::vector<BsRotation>& rotations,
                               const std::vector<SaaContext>& contexts, MessageBus& bus,
                               int n_grid, double eps_tol, int t, int tau);

struct MatchingRecord {
  int t = 0, tau = 0;
  std::vector<std::pair<int, int>> edges;
};

struct RotationRecord {
  int t = 0, cell = 0;
  double rhat_before = 0.0, rhat_after = 0.0;
  std::vector<double> z_after;  // encoded rotation
  double wall_seconds = 0.0;
};

struct EvalRecord {
  int t = 0;  // state after t AO iterations
  double surrogate_sum = 0.0, actual_sum = 0.0;
  std::vector<double> cell_actual, cell_surrogate;
  long messages = 0, scalars = 0;  // cumulative
  double wall_seconds = 0.0;
};

struct CoordinationTrace {
  std::vector<MatchingRecord> matchings;
  std::vector<PairwiseRecord> pairwise;
  std::vector<RotationRecord> rotations;
  std::vector<EvalRecord> evals;
  MessageBus bus;
};

struct AoResult {
  std::vector<BsRotation> rotations;
  IpcThresholds sigma;
  CoordinationTrace trace;
};

struct AoOptions {
  int t_max = 5;
  int t_ipc = 5;
  int n_grid = 7;
  double eps_tol = 1e-4;
  double sigma_floor = 1e-9;
  int saa_samples = 20;
  int eval_samples = 20;
  PsoParams pso;
  SolverOptions solver;       // inner evaluations (non-strict)
  SolverOptions eval_solver;  // reporting evaluations (strict)
  bool coordinate_ipc = true;
  bool optimize_rotation = true;
  bool use_ipc = true;  // whether short-term problems carry IPC at all
  int start_iteration = 0;  // resume support: skip iterations < start
  // Invoked after the initial evaluation (t=0) and after each completed AO
  // iteration; used for checkpointing and incremental persistence.
  std::function<void(const AoResult&, int)> on_iteration;
};

// Network-wide evaluation on a frozen sample set: per-cell strict solves,
// actual rates over the full network.
struct NetworkEvaluation {
  double surrogate_sum = 0.0, actual_sum = 0.0;
  std::vector<double> cell_actual, cell_surrogate;
};
NetworkEvaluation evaluate_network(const NetworkScenario& scenario,
                                   const std::vector<BsRotation>& rotations,
                                   const IpcThresholds& sigma, bool use_ipc, int eval_samples,
                                   std::uint64_t eval_seed, const SolverOptions& eval_solver);

// The decentralized long-term alternating loop: T_ipc rounds of matched
// pairwise IPC coordination, then per-BS warm-started rotation updates, with
// a network evaluation after every iteration (and one for the initial state).
AoResult ao_run(const NetworkScenario& scenario, std::vector<BsRotation> z0,
                IpcThresholds sigma0, const AoOptions& opts, std::uint64_t seed);

}  // namespace sixdma
