#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sixdma/sampling.hpp"
#include "sixdma/scenario.hpp"

namespace sixdma {

// Directed interference-power caps sigma(m, n) for adjacent cell pairs,
// floored at sigma_fl.
class IpcThresholds {
 public:
  IpcThresholds() = default;
  IpcThresholds(const AdjacencyGraph& graph, double initial, double floor);

  double get(int m, int n) const;
  void set(int m, int n, double value);
  double floor() const { return floor_; }
  // Sum of incoming caps sigma(n, m) over neighbors n of m.
  double incoming_sum(int m) const;
  const AdjacencyGraph& graph() const { return *graph_; }

 private:
  const AdjacencyGraph* graph_ = nullptr;
  double floor_ = 0.0;
  Eigen::MatrixXd values_;
};

// One cell's short-term problem: in-cell channels, victim channels toward
// adjacent cells' users (one flattened cap per victim), and the constant
// c = noise + sum of incoming caps that bounds out-of-cell interference.
struct CellProblem {
  Eigen::MatrixXcd channels;    // NB x K
  Eigen::VectorXd weights;      // K
  Eigen::MatrixXcd victims;     // NB x Q (may be empty)
  Eigen::VectorXd ipc_limits;   // Q
  double c_const = 0.0;         // > 0
  double p_max = 0.0;
};

struct SolverOptions {
  int t_wmmse = 50;
  int t_dual = 20;
  double early_stop_rel = 1e-5;
  // Relative power tolerance of the bisection. Tighter than strictly needed
  // so the single-user rate matches the closed form to 1e-6 bits.
  double bisect_tol = 1e-9;
  // Base dual step; scaled per constraint by tr(C)/(NB*||l_q||^2) so the
  // multiplier magnitude is commensurate with the quadratic form.
  double dual_step0 = 1.0;
  double ridge_scale = 1e-12;
  double feas_rel_tol = 1e-2;  // accepted relative IPC violation (default mode)
  bool strict = false;         // post-solve uniform down-scaling to exact feasibility
  bool record_trace = true;
};

struct SolverDiagnostics {
  int iterations = 0;
  bool converged = false;
  bool feasible = true;          // max_ipc_residual <= feas_rel_tol
  double max_ipc_residual = 0.0; // max over q of I_q / sigma_q - 1, clamped at 0
  double scale_factor = 1.0;     // strict-mode uniform scaling applied
  double mu = 0.0;
  std::vector<double> objective_trace;  // surrogate weighted rate per outer iteration
  Eigen::VectorXd lambda;
};

struct CellSolveResult {
  Eigen::MatrixXcd precoders;  // NB x K
  Eigen::VectorXd user_rates;  // surrogate rates, bits/s/Hz
  double weighted_sum = 0.0;
  double transmit_power = 0.0;
  SolverDiagnostics diag;
};

// Per-BS precoders for the whole network plus solver bookkeeping.
struct PrecoderSet {
  std::vector<Eigen::MatrixXcd> per_bs;
  std::vector<double> power;
};

struct MmseState {
  Eigen::VectorXcd u;
  Eigen::VectorXd v;
  Eigen::VectorXd e;
};

// MMSE receivers, MSE values and weights for fixed precoders. c_per_user
// collects noise plus the interference bound per user (all entries > 0).
MmseState mmse_step(const Eigen::MatrixXcd& channels, const Eigen::MatrixXcd& precoders,
                    const Eigen::VectorXd& c_per_user);

// Projected subgradient step on the IPC duals using threshold-normalized
// residuals; `step` may be a scalar or one entry per constraint.
Eigen::VectorXd dual_ascent_step(const Eigen::VectorXd& lambda, const Eigen::VectorXd& leakage,
                                 const Eigen::VectorXd& limits, const Eigen::VectorXd& step);
Eigen::VectorXd dual_ascent_step(const Eigen::VectorXd& lambda, const Eigen::VectorXd& leakage,
                                 const Eigen::VectorXd& limits, double step);

// Closed-form beamformer for fixed duals: w_k = (C(lambda) + mu I)^-1 b_k.
// mu_effective reports the ridge actually applied when mu == 0.
Eigen::MatrixXcd beamformer_solve(const Eigen::VectorXd& lambda, double mu,
                                  const CellProblem& problem, const MmseState& state,
                                  double ridge_scale, double* mu_effective = nullptr);

// Smallest mu >= 0 meeting the power budget: 0 if the unconstrained solution
// already fits, otherwise the bisection root of ||W(mu)||_F^2 = p_max within
// relative tolerance.
double power_bisection(const Eigen::VectorXd& lambda, const CellProblem& problem,
                       const MmseState& state, double tol_rel, double ridge_scale);

// IPC-constrained per-cell WMMSE (problem P4). Returns the best
// feasibility-respecting iterate; in strict mode the returned precoders are
// uniformly scaled so every cap holds exactly.
CellSolveResult solve_p4(const CellProblem& problem, const SolverOptions& opts);

// Plain per-cell WMMSE under a fixed interference bound c (no IPC
// constraints); its objective trace is monotone nondecreasing.
CellSolveResult solve_p3(const Eigen::MatrixXcd& channels, const Eigen::VectorXd& weights,
                         double p_max, double c, const SolverOptions& opts);

struct NetworkSolveResult {
  PrecoderSet precoders;
  Eigen::VectorXd user_rates;  // actual rates
  double weighted_sum = 0.0;
  std::vector<double> trace;  // weighted sum-rate per outer iteration
  int iterations = 0;
  bool converged = false;
};

// Network-wide WMMSE for the centralized inner problem: receivers track the
// total (in-cell + cross-cell) interference, each BS gets its own power
// bisection.
NetworkSolveResult solve_network_wsr(const NetworkScenario& scenario,
                                     const ChannelSample& sample, const SolverOptions& opts);

struct RateReport {
  Eigen::VectorXd user_rates;
  double weighted_sum = 0.0;
};

// Exact instantaneous rates from the actual SINR; interference outside the
// relevance set counts as zero.
RateReport actual_rates(const PrecoderSet& precoders, const ChannelSample& sample,
                        const NetworkScenario& scenario);

// Rates from the SINR lower bound: cross-cell interference replaced by the
// sum of incoming caps.
RateReport surrogate_rates(const Eigen::MatrixXcd& precoders, const Eigen::MatrixXcd& channels,
                           const Eigen::VectorXd& weights, double c_const);

}  // namespace sixdma
