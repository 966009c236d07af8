#include "sixdma/coordination.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "sixdma/parallel.hpp"
#include "sixdma/rng.hpp"

namespace sixdma {

long MessageBus::total_scalars() const {
  long s = 0;
  for (const auto& msg : ledger_) s += msg.scalars;
  return s;
}

std::vector<std::pair<int, int>> random_maximal_matching(const AdjacencyGraph& graph,
                                                         std::uint64_t seed) {
  std::vector<std::pair<int, int>> edges = graph.edges;
  StreamRng rng(StreamRng::derive(seed, stream_tag::kMatching));
  rng.shuffle(edges);
  std::vector<bool> used(graph.num_vertices, false);
  std::vector<std::pair<int, int>> matching;
  for (auto [a, b] : edges) {
    if (used[a] || used[b]) continue;
    used[a] = used[b] = true;
    matching.emplace_back(a, b);
  }
  std::sort(matching.begin(), matching.end());
  return matching;
}

std::vector<double> ipc_candidates(double sigma_cur, int n_grid, double sigma_floor) {
  const double lb = std::max(0.1 * sigma_cur, sigma_floor);
  const double ub = std::max(10.0 * sigma_cur, lb);
  std::vector<double> cand;
  cand.push_back(sigma_cur);
  if (n_grid > 1) {
    for (int r = 0; r < n_grid; ++r) {
      cand.push_back(lb * std::pow(ub / lb, static_cast<double>(r) / (n_grid - 1)));
    }
  } else {
    cand.push_back(lb);
  }
  std::sort(cand.begin(), cand.end());
  std::vector<double> out;
  for (double c : cand) {
    if (out.empty() || c - out.back() > 1e-12 * std::max(c, out.back())) {
      out.push_back(c);
    }
  }
  return out;
}

namespace {

// Pairwise SAA utility for candidate caps (x, y) on the directed pair
// (m->n, n->m): each endpoint re-solves its own cell with the modified caps.
double pairwise_utility(int m, int n, double x, double y, const IpcThresholds& sigma,
                        const std::vector<BsRotation>& rotations,
                        const std::vector<SaaContext>& contexts) {
  IpcThresholds trial = sigma;
  trial.set(m, n, x);
  trial.set(n, m, y);
  return saa_cell_rate(rotations[m], trial, contexts[m]) +
         saa_cell_rate(rotations[n], trial, contexts[n]);
}

// Returns the index of the best utility, preferring the smaller threshold on
// relative ties (candidates are ascending).
int argmax_with_tiebreak(const std::vector<double>& utilities) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(utilities.size()); ++i) {
    const double tol = 1e-12 * std::max({std::abs(utilities[i]), std::abs(utilities[best]), 1.0});
    if (utilities[i] - utilities[best] > tol) best = i;
  }
  return best;
}

}  // namespace

PairwiseRecord pairwise_search(int m, int n, IpcThresholds& sigma,
                               const std::vector<BsRotation>& rotations,
                               const std::vector<SaaContext>& contexts, MessageBus& bus,
                               int n_grid, double eps_tol, int t, int tau) {
  const auto t0 = std::chrono::steady_clock::now();
  PairwiseRecord rec;
  rec.t = t;
  rec.tau = tau;
  rec.m = m;
  rec.n = n;
  rec.sigma_mn_before = sigma.get(m, n);
  rec.sigma_nm_before = sigma.get(n, m);

  auto run_stage = [&](int proposer, int partner, const std::vector<double>& candidates,
                       const std::function<double(double)>& utility_of) {
    std::vector<double> utilities(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      bus.send(t, tau, proposer, partner, BusMessage::Kind::CandidateThreshold);
      utilities[i] = utility_of(candidates[i]);
      // each side reports its local utility scalar to the other
      bus.send(t, tau, proposer, partner, BusMessage::Kind::UtilityScalar);
      bus.send(t, tau, partner, proposer, BusMessage::Kind::UtilityScalar);
    }
    bus.send(t, tau, proposer, partner, BusMessage::Kind::Decision);
    return utilities;
  };

  // Stage 1: vary sigma(m, n) with sigma(n, m) fixed.
  rec.stage1_candidates = ipc_candidates(rec.sigma_mn_before, n_grid, sigma.floor());
  rec.stage1_utilities = run_stage(m, n, rec.stage1_candidates, [&](double x) {
    return pairwise_utility(m, n, x, rec.sigma_nm_before, sigma, rotations, contexts);
  });
  const int best1 = argmax_with_tiebreak(rec.stage1_utilities);
  const double x_bar = rec.stage1_candidates[best1];

  // The current pair value comes from the stage-1 candidate equal to the
  // current threshold (always present in the grid).
  rec.phi_cur = 0.0;
  for (std::size_t i = 0; i < rec.stage1_candidates.size(); ++i) {
    if (std::abs(rec.stage1_candidates[i] - rec.sigma_mn_before) <=
        1e-12 * rec.sigma_mn_before) {
      rec.phi_cur = rec.stage1_utilities[i];
      break;
    }
  }

  // Stage 2: vary sigma(n, m) with the stage-1 winner fixed.
  rec.stage2_candidates = ipc_candidates(rec.sigma_nm_before, n_grid, sigma.floor());
  rec.stage2_utilities = run_stage(n, m, rec.stage2_candidates, [&](double y) {
    return pairwise_utility(m, n, x_bar, y, sigma, rotations, contexts);
  });
  const int best2 = argmax_with_tiebreak(rec.stage2_utilities);
  const double y_bar = rec.stage2_candidates[best2];
  rec.phi_new = rec.stage2_utilities[best2];

  rec.accepted = rec.phi_new > rec.phi_cur + eps_tol;
  if (rec.accepted) {
    sigma.set(m, n, x_bar);
    sigma.set(n, m, y_bar);
  }
  rec.sigma_mn_after = sigma.get(m, n);
  rec.sigma_nm_after = sigma.get(n, m);
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

NetworkEvaluation evaluate_network(const NetworkScenario& scenario,
                                   const std::vector<BsRotation>& rotations,
                                   const IpcThresholds& sigma, bool use_ipc, int eval_samples,
                                   std::uint64_t eval_seed, const SolverOptions& eval_solver) {
  const int m_cells = scenario.num_cells();
  NetworkEvaluation ev;
  ev.cell_actual.assign(m_cells, 0.0);
  ev.cell_surrogate.assign(m_cells, 0.0);

  struct PerSample {
    double actual = 0.0, surrogate = 0.0;
    std::vector<double> cell_actual, cell_surrogate;
  };
  std::vector<PerSample> results(eval_samples);

  // Contexts only cache solver config here; draws are per evaluation sample.
  std::vector<SaaContext> cell_ctx(m_cells);
  for (int m = 0; m < m_cells; ++m) {
    cell_ctx[m].scenario = &scenario;
    cell_ctx[m].cell = m;
    cell_ctx[m].solver = eval_solver;
    cell_ctx[m].use_ipc = use_ipc;
  }

  parallel_for(eval_samples, [&](int s) {
    const SampleDraws draws = draw_positions_and_fading(scenario, s, eval_seed);
    PerSample& out = results[s];
    out.cell_actual.assign(m_cells, 0.0);
    out.cell_surrogate.assign(m_cells, 0.0);
    PrecoderSet precoders;
    precoders.per_bs.resize(m_cells);
    for (int m = 0; m < m_cells; ++m) {
      SaaContext one = cell_ctx[m];
      one.draws = {draws};
      const CellProblem pb = cell_problem_for_sample(one, rotations[m], sigma, 0);
      const CellSolveResult res = solve_p4(pb, eval_solver);
      precoders.per_bs[m] = res.precoders;
      out.cell_surrogate[m] = res.weighted_sum;
      out.surrogate += res.weighted_sum;
    }
    const ChannelSample sample = assemble_sample(scenario, rotations, draws);
    const RateReport actual = actual_rates(precoders, sample, scenario);
    out.actual = actual.weighted_sum;
    for (int k = 0; k < scenario.num_users(); ++k) {
      out.cell_actual[scenario.users[k].cell] +=
          scenario.users[k].weight * actual.user_rates(k);
    }
  });

  for (const auto& r : results) {
    ev.actual_sum += r.actual / eval_samples;
    ev.surrogate_sum += r.surrogate / eval_samples;
    for (int m = 0; m < m_cells; ++m) {
      ev.cell_actual[m] += r.cell_actual[m] / eval_samples;
      ev.cell_surrogate[m] += r.cell_surrogate[m] / eval_samples;
    }
  }
  return ev;
}

AoResult ao_run(const NetworkScenario& scenario, std::vector<BsRotation> z,
                IpcThresholds sigma, const AoOptions& opts, std::uint64_t seed) {
  const int m_cells = scenario.num_cells();
  AoResult result{std::move(z), std::move(sigma), {}};
  const std::uint64_t eval_seed = StreamRng::derive(seed, stream_tag::kEvaluation);

  std::vector<SaaContext> contexts;
  contexts.reserve(m_cells);
  for (int m = 0; m < m_cells; ++m) {
    contexts.push_back(
        SaaContext::make(scenario, m, opts.saa_samples, seed, opts.solver, opts.use_ipc));
  }

  auto evaluate_and_log = [&](int t) {
    const auto t0 = std::chrono::steady_clock::now();
    const NetworkEvaluation ev =
        evaluate_network(scenario, result.rotations, result.sigma, opts.use_ipc,
                         opts.eval_samples, eval_seed, opts.eval_solver);
    EvalRecord rec;
    rec.t = t;
    rec.surrogate_sum = ev.surrogate_sum;
    rec.actual_sum = ev.actual_sum;
    rec.cell_actual = ev.cell_actual;
    rec.cell_surrogate = ev.cell_surrogate;
    rec.messages = result.trace.bus.total_messages();
    rec.scalars = result.trace.bus.total_scalars();
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.trace.evals.push_back(rec);
  };

  if (opts.start_iteration == 0) {
    evaluate_and_log(0);
    if (opts.on_iteration) opts.on_iteration(result, 0);
  }

  for (int t = opts.start_iteration; t < opts.t_max; ++t) {
    if (opts.coordinate_ipc) {
      for (int tau = 1; tau <= opts.t_ipc; ++tau) {
        const auto matching = random_maximal_matching(
            scenario.graph, StreamRng::derive(seed, stream_tag::kMatching, t, tau));
        result.trace.matchings.push_back({t, tau, matching});
        for (auto [m, n] : matching) {
          result.trace.pairwise.push_back(pairwise_search(m, n, result.sigma, result.rotations,
                                                          contexts, result.trace.bus,
                                                          opts.n_grid, opts.eps_tol, t, tau));
        }
      }
    }
    if (opts.optimize_rotation) {
      for (int m = 0; m < m_cells; ++m) {
        const auto t0 = std::chrono::steady_clock::now();
        RotationRecord rec;
        rec.t = t;
        rec.cell = m;
        result.rotations[m] =
            rotation_update(result.rotations[m], result.sigma, contexts[m], opts.pso,
                            StreamRng::derive(seed, stream_tag::kPso, t, m), &rec.rhat_before,
                            &rec.rhat_after);
        const Eigen::VectorXd enc = encode_rotation(result.rotations[m]);
        rec.z_after.assign(enc.data(), enc.data() + enc.size());
        rec.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        result.trace.rotations.push_back(rec);
      }
    }
    evaluate_and_log(t + 1);
    if (opts.on_iteration) opts.on_iteration(result, t + 1);
  }
  return result;
}

}  // namespace sixdma
